//! The continuous-variable protocol at label level.
//!
//! Continuous states are not normalizable, so a round here only tracks
//! `(b, c)` labels through the phase-space algebra. Alice's outcomes `c1`,
//! `c1'` are drawn uniformly from a configured interval because a uniform
//! law over all reals does not exist.

use rand::Rng;
use serde::Serialize;

use super::session_rng;
use crate::phasespace::{cv_equal_delta, cv_shift, cv_split, CvLabel, CvSlope};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvSessionConfig {
    pub rounds: usize,
    /// Range for the shared slope b and Alice's slope b1.
    pub b_range: (f64, f64),
    /// Range for the shared intercept c and for Alice's outcomes.
    pub c_range: (f64, f64),
    /// Intercept difference between the two pairs.
    pub delta: f64,
    pub seed: u64,
}

impl Default for CvSessionConfig {
    fn default() -> Self {
        CvSessionConfig {
            rounds: 100,
            b_range: (-4.0, 4.0),
            c_range: (-10.0, 10.0),
            delta: 0.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvRoundRecord {
    pub round: u64,
    pub bit_sent: u8,
    pub b: f64,
    pub c: f64,
    pub b1: f64,
    pub c1: f64,
    pub c1p: f64,
    pub lambda: f64,
    pub decoded: u8,
}

/// Smallest |λ - λ_match| used for bit 0; keeps the two labels
/// distinguishable at the equality tolerance.
const MIN_MISMATCH: f64 = 1e-6;

/// Bit 1 sends `c1' - c1 + Δ`; bit 0 sends that value plus a nonzero offset
/// drawn uniformly from ±(width of the c range).
pub fn cv_alice_encode<R: Rng + ?Sized>(
    bit: u8,
    c1: f64,
    c1p: f64,
    delta: f64,
    c_range: (f64, f64),
    rng: &mut R,
) -> f64 {
    let matching = c1p - c1 + delta;
    if bit == 1 {
        return matching;
    }
    let width = (c_range.1 - c_range.0).abs().max(1.0);
    loop {
        let offset = rng.random_range(-width..width);
        if offset.abs() > MIN_MISMATCH {
            return matching + offset;
        }
    }
}

fn uniform<R: Rng + ?Sized>((lo, hi): (f64, f64), rng: &mut R) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo.min(hi)..lo.max(hi))
    }
}

pub fn run_cv_round<R: Rng + ?Sized>(config: &CvSessionConfig, round: u64, rng: &mut R) -> CvRoundRecord {
    let b = uniform(config.b_range, rng);
    let c = uniform(config.c_range, rng);
    let first = CvLabel::new(b, c);
    let second = CvLabel::new(b, c - config.delta);

    let b1 = uniform(config.b_range, rng);
    let c1 = uniform(config.c_range, rng);
    let c1p = uniform(config.c_range, rng);
    let bob = cv_split(first, b1, c1).expect("finite slope");
    let bob_p = cv_split(second, b1, c1p).expect("finite slope");

    let bit = u8::from(rng.random::<bool>());
    let lambda = cv_alice_encode(bit, c1, c1p, config.delta, config.c_range, rng);
    let equal = cv_equal_delta(bob, cv_shift(bob_p, lambda)).expect("same slope b - b1");
    debug_assert!(matches!(bob.b, CvSlope::Finite(_)));

    CvRoundRecord {
        round,
        bit_sent: bit,
        b,
        c,
        b1,
        c1,
        c1p,
        lambda,
        decoded: u8::from(equal),
    }
}

pub fn run_cv_session(config: &CvSessionConfig) -> Vec<CvRoundRecord> {
    let mut rng = session_rng(config.seed, 0);
    (0..config.rounds as u64)
        .map(|round| run_cv_round(config, round, &mut rng))
        .collect()
}
