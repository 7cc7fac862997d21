//! Key distribution with pairs of entangled MUB states.
//!
//! Per round Alice and Bob share `|2;b,c⟩` and `|2;b,c-Δ⟩`. Alice measures
//! her half of both in one basis `b1` and gets `c1`, `c1'`; Bob's halves
//! collapse to `|1;b-b1, c-c1⟩` and `|1;b-b1, c-Δ-c1'⟩`. Eve may
//! intercept-resend Bob's particles in transit. The round then becomes a
//! message round (Alice announces a shift λ, Bob shifts his second particle
//! and tests the two for equality) or a sacrificial check round (Alice
//! discloses `b2 = b-b1` and the expected `c2 = c-c1`, Bob measures).

pub mod config;
pub mod cv;
pub mod transcript;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::entangle::{entangled_mub, measure_first_in, shift_remote, PairLabel};
use crate::gf::{Field, GfElem};
use crate::hilbert::{born_sample, inner, swap_test, StateVec, SwapOutcome, ACCUMULATED_TOL};
use crate::mub::{all_bases, mub_basis, BasisId};

pub use config::{
    BasisPicker, BitSource, ConfigError, EveSpec, EveStrategy, MeasurementMode, PairLabelChoice,
    PairLabelSpec, SessionConfig, SessionConfigFile,
};
pub use transcript::{read_jsonl, RoundKind, RoundRecord, Summary, Transcript, SCHEMA_VERSION};

/// The RNG stream for one session: ChaCha20 keyed by `seed`, on stream
/// `session_index`.
pub fn session_rng(seed: u64, session_index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(session_index);
    rng
}

/// Alice's announcement. Bit 1 sends `λ = c1' - c1 + Δ`, which makes Bob's
/// shifted particle equal to his first one; bit 0 sends one of the other
/// d-1 values uniformly.
pub fn alice_encode<R: Rng + ?Sized>(
    bit: u8,
    c1: &GfElem,
    c1p: &GfElem,
    delta: &GfElem,
    rng: &mut R,
) -> GfElem {
    let matching = c1p - c1 + delta;
    if bit == 1 {
        return matching;
    }
    let field = matching.field().clone();
    let m = matching.index();
    let k = rng.random_range(0..field.d() - 1);
    let pick = if k < m { k } else { k + 1 };
    field.from_index(pick).expect("pick below d")
}

/// Bob's equality test and what it observed.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoding {
    pub bit: u8,
    /// |⟨state2|shifted state2'⟩| in oracle mode.
    pub overlap: Option<f64>,
    /// One entry per swap repetition in swap mode.
    pub swap_outcomes: Vec<SwapOutcome>,
}

/// Shifts `state2p` by λ and decides whether it equals `state2`.
///
/// Oracle mode reads the overlap directly. Swap mode runs `reps` swap tests
/// on fresh copies and decodes 0 as soon as one comes out antisymmetric.
pub fn bob_decode<R: Rng + ?Sized>(
    field: &Field,
    state2: &StateVec,
    state2p: &StateVec,
    lambda: &GfElem,
    mode: MeasurementMode,
    reps: usize,
    rng: &mut R,
) -> Decoding {
    let shifted = shift_remote(field, state2p, lambda);
    match mode {
        MeasurementMode::Oracle => {
            let overlap = inner(state2, &shifted).expect("equal dims").norm();
            Decoding {
                bit: u8::from(overlap > 1.0 - ACCUMULATED_TOL),
                overlap: Some(overlap),
                swap_outcomes: Vec::new(),
            }
        }
        MeasurementMode::Swap => {
            let mut outcomes = Vec::with_capacity(reps);
            for _ in 0..reps {
                let outcome = swap_test(state2.clone(), shifted.clone(), rng)
                    .expect("collapsed states are normalized");
                outcomes.push(outcome);
                if outcome == SwapOutcome::Antisymmetric {
                    break;
                }
            }
            let bit = u8::from(!outcomes.contains(&SwapOutcome::Antisymmetric));
            Decoding {
                bit,
                overlap: None,
                swap_outcomes: outcomes,
            }
        }
    }
}

/// A configured session with every basis precomputed.
pub struct Session<'a> {
    config: &'a SessionConfig,
    /// Indexed by basis code.
    bases: Vec<Vec<StateVec>>,
}

impl<'a> Session<'a> {
    pub fn new(config: &'a SessionConfig) -> Self {
        let bases = all_bases(&config.field)
            .iter()
            .map(|id| mub_basis(&config.field, id))
            .collect();
        Session { config, bases }
    }

    fn basis(&self, id: &BasisId) -> &[StateVec] {
        &self.bases[id.code(&self.config.field)]
    }

    fn pick_eve_basis<R: Rng + ?Sized>(&self, picker: &BasisPicker, rng: &mut R) -> BasisId {
        let field = &self.config.field;
        let code = match picker {
            BasisPicker::Fixed(id) => return id.clone(),
            BasisPicker::UniformQuadratic => rng.random_range(0..field.d()),
            BasisPicker::UniformAll => rng.random_range(0..=field.d()),
        };
        BasisId::from_code(field, code).expect("code within 0..=d")
    }

    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> GfElem {
        let field = &self.config.field;
        field
            .from_index(rng.random_range(0..field.d()))
            .expect("index below d")
    }

    pub fn run_round<R: Rng + ?Sized>(&self, round: u64, rng: &mut R) -> RoundRecord {
        let cfg = self.config;
        let field = &cfg.field;

        let label = match &cfg.pair_label {
            PairLabelChoice::Fixed(label) => label.clone(),
            PairLabelChoice::RandomPerRound => {
                let b = self.random_elem(rng);
                PairLabel::new(b, self.random_elem(rng))
            }
        };
        let first = entangled_mub(field, &label);
        let second = entangled_mub(field, &PairLabel::new(label.b.clone(), &label.c - &cfg.delta));

        // One b1 for both pairs.
        let b1 = self.random_elem(rng);
        let alice_basis = BasisId::Quadratic(b1.clone());
        let (c1, mut bob1) = measure_first_in(field, &first, self.basis(&alice_basis), rng);
        let (c1p, mut bob2) = measure_first_in(field, &second, self.basis(&alice_basis), rng);

        let mut eve_basis = None;
        let mut eve_outcome = None;
        if let EveStrategy::InterceptResend(picker) = &cfg.eve {
            let basis_id = self.pick_eve_basis(picker, rng);
            let basis = self.basis(&basis_id);
            let (k1, resent1) = born_sample(&bob1, basis, rng).expect("MUB bases are orthonormal");
            let (k2, resent2) = born_sample(&bob2, basis, rng).expect("MUB bases are orthonormal");
            bob1 = resent1;
            bob2 = resent2;
            eve_basis = Some(basis_id.code(field));
            eve_outcome = Some([k1, k2]);
        }

        let kind = if rng.random::<f64>() < cfg.check_fraction {
            RoundKind::Check
        } else {
            RoundKind::Message
        };

        let mut record = RoundRecord {
            v: SCHEMA_VERSION,
            round,
            kind,
            bit_sent: None,
            lambda: None,
            b1: b1.index(),
            c1: c1.index(),
            c1p: c1p.index(),
            eve_basis,
            eve_outcome,
            decoded: None,
            check_b2: None,
            check_expected: None,
            check_measured: None,
            check_passed: None,
        };

        match kind {
            RoundKind::Message => {
                let bit = match cfg.bits {
                    BitSource::Fixed(bit) => bit,
                    BitSource::Random(_) => u8::from(rng.random::<bool>()),
                };
                let lambda = alice_encode(bit, &c1, &c1p, &cfg.delta, rng);
                let decoding = bob_decode(
                    field,
                    &bob1,
                    &bob2,
                    &lambda,
                    cfg.mode,
                    cfg.swap_repetitions,
                    rng,
                );
                record.bit_sent = Some(bit);
                record.lambda = Some(lambda.index());
                record.decoded = Some(decoding.bit);
            }
            RoundKind::Check => {
                let b2 = &label.b - &b1;
                let expected = &label.c - &c1;
                let (measured, _) = born_sample(&bob1, self.basis(&BasisId::Quadratic(b2.clone())), rng)
                    .expect("MUB bases are orthonormal");
                record.check_b2 = Some(b2.index());
                record.check_expected = Some(expected.index());
                record.check_measured = Some(measured);
                record.check_passed = Some(measured == expected.index());
            }
        }
        record
    }

    pub fn run(&self) -> Transcript {
        let mut rng = session_rng(self.config.seed, self.config.session_index);
        let records: Vec<RoundRecord> = (0..self.config.rounds as u64)
            .map(|round| self.run_round(round, &mut rng))
            .collect();
        Transcript {
            summary: Summary::from_records(self.config.echo(), &records),
            records,
        }
    }
}

/// One round with a freshly built session cache.
pub fn run_round<R: Rng + ?Sized>(config: &SessionConfig, round: u64, rng: &mut R) -> RoundRecord {
    Session::new(config).run_round(round, rng)
}

/// Runs every round of a session on its own RNG stream.
pub fn run_session(config: &SessionConfig) -> Transcript {
    Session::new(config).run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldConfig;
    use crate::mub::{mub_state, MubLabel};
    use rand_chacha::ChaCha8Rng;

    fn cfg(p: u32, rounds: usize, f: impl FnOnce(&mut SessionConfigFile)) -> SessionConfig {
        let mut file = SessionConfigFile::new(
            FieldConfig {
                p,
                n: 1,
                modulus: None,
            },
            rounds,
        );
        f(&mut file);
        SessionConfig::from_file(&file).unwrap()
    }

    #[test]
    fn encode_bit_one() {
        let f = Field::new(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let lambda = alice_encode(1, &f.scalar(2), &f.scalar(0), &f.zero(), &mut rng);
        assert_eq!(lambda, f.scalar(1));
    }

    #[test]
    fn encode_bit_zero_avoids_match_exhaustive() {
        let f = Field::new(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for c1 in f.elements() {
            for c1p in f.elements() {
                for delta in f.elements() {
                    let matching = alice_encode(1, &c1, &c1p, &delta, &mut rng);
                    let mut seen = std::collections::BTreeSet::new();
                    for _ in 0..200 {
                        let l = alice_encode(0, &c1, &c1p, &delta, &mut rng);
                        assert_ne!(l, matching);
                        seen.insert(l.index());
                    }
                    assert_eq!(seen.len(), 2);
                }
            }
        }
    }

    #[test]
    fn nonzero_delta_realigns_bob() {
        let f = Field::new(5, 1).unwrap();
        let (b, c, delta) = (f.scalar(3), f.scalar(1), f.scalar(2));
        let b1 = f.scalar(4);
        let (c1, c1p) = (f.scalar(2), f.scalar(0));
        let bob1 = mub_state(&f, &MubLabel::quadratic(&b - &b1, &c - &c1));
        let bob2 = mub_state(&f, &MubLabel::quadratic(&b - &b1, &c - &delta - &c1p));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let lambda = alice_encode(1, &c1, &c1p, &delta, &mut rng);
        let shifted = shift_remote(&f, &bob2, &lambda);
        assert!(shifted.max_abs_diff(&bob1).unwrap() < 1e-12);
    }

    #[test]
    fn decode_modes() {
        let f = Field::new(7, 1).unwrap();
        let s = |c: u32| mub_state(&f, &MubLabel::quadratic(f.scalar(2), f.scalar(c)));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for mode in [MeasurementMode::Oracle, MeasurementMode::Swap] {
            for _ in 0..100 {
                let d = bob_decode(&f, &s(4), &s(1), &f.scalar(3), mode, 3, &mut rng);
                assert_eq!(d.bit, 1);
            }
        }
        let d = bob_decode(&f, &s(4), &s(1), &f.scalar(2), MeasurementMode::Oracle, 1, &mut rng);
        assert_eq!(d.bit, 0);
        assert!(d.overlap.unwrap() < 1e-9);
    }

    #[test]
    fn no_eve_oracle_round_trip() {
        let config = cfg(5, 300, |f| f.check_fraction = 0.3);
        let t = run_session(&config);
        assert_eq!(t.summary.bit_errors, 0);
        assert_eq!(t.summary.check_pass_rate, Some(1.0));
        assert!(t.is_self_consistent());
        assert!(t.summary.message_rounds > 0 && t.summary.check_rounds > 0);
    }

    #[test]
    fn eve_in_correct_basis_is_invisible_on_checks() {
        // With b and b1 fixed Eve can sit in the right basis b2 = b - b1
        // only when b1 is known; use d=3 and b1 drawn, then filter rounds.
        let config = cfg(3, 600, |f| {
            f.check_fraction = 1.0;
            f.pair_label = PairLabelSpec::Fixed { b: 1, c: 2 };
            f.eve = EveSpec::Fixed(0);
        });
        let t = run_session(&config);
        let mut right = 0;
        for r in &t.records {
            if r.check_b2 == r.eve_basis {
                right += 1;
                assert_eq!(r.check_passed, Some(true));
            }
        }
        assert!(right > 100);
    }

    #[test]
    fn same_seed_same_transcript() {
        let config = cfg(5, 50, |f| {
            f.eve = EveSpec::UniformAll;
            f.mode = MeasurementMode::Swap;
            f.swap_repetitions = 2;
            f.seed = 9;
        });
        assert_eq!(run_session(&config), run_session(&config));
        let other = cfg(5, 50, |f| {
            f.eve = EveSpec::UniformAll;
            f.seed = 9;
            f.session_index = 1;
        });
        assert_ne!(run_session(&config).records, run_session(&other).records);
    }

    #[test]
    fn single_round_helper() {
        let config = cfg(3, 1, |f| f.check_fraction = 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = run_round(&config, 7, &mut rng);
        assert_eq!(r.round, 7);
        assert_eq!(r.kind, RoundKind::Message);
        assert_eq!(r.decoded, r.bit_sent);
    }
}
