//! Two-particle states entangled in the computational basis,
//! `|2;b,c⟩ = d^{-1/2} Σ_n ω^{tr(b n² + c n)} |n⟩|n⟩`.
//!
//! Contracting the first particle with `|1;b1,c1⟩` leaves the second in
//! `d^{-1/2} |1;b-b1,c-c1⟩`, with no extra phase. That identity drives the
//! whole key-distribution protocol.

use num_complex::Complex64;
use rand::Rng;

use crate::gf::{Field, GfElem};
use crate::hilbert::{
    apply_diag_phase, inner_unchecked, project_first, sample_weighted, StateVec, ALGEBRAIC_TOL,
};
use crate::mub::{mub_basis, omega_pow, quadratic_exponent, quadratic_phases, BasisId, MubLabel};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairLabel {
    pub b: GfElem,
    pub c: GfElem,
}

impl PairLabel {
    pub fn new(b: GfElem, c: GfElem) -> Self {
        PairLabel { b, c }
    }

    /// The single-particle label carrying the same coordinates.
    pub fn as_mub_label(&self) -> MubLabel {
        MubLabel::quadratic(self.b.clone(), self.c.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntangledPair {
    pub label: PairLabel,
    pub state: StateVec,
}

pub fn entangled_mub(field: &Field, label: &PairLabel) -> EntangledPair {
    let d = field.d();
    let scale = 1.0 / (d as f64).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    for (n, ph) in quadratic_phases(field, &label.b, &label.c).into_iter().enumerate() {
        amps[n * d + n] = ph * scale;
    }
    EntangledPair {
        label: label.clone(),
        state: StateVec::new(amps),
    }
}

/// Label of the second particle after the first is found in `|b1; c1⟩`.
///
/// For a quadratic `b1` this is `(b - b1, c - c1)`. For the computational
/// basis the partner is pinned to the same position `c1` (up to phase).
pub fn remote_label(pair: &PairLabel, b1: &BasisId, c1: &GfElem) -> MubLabel {
    match b1 {
        BasisId::Quadratic(b1) => MubLabel::quadratic(&pair.b - b1, &pair.c - c1),
        BasisId::Computational => MubLabel::computational(c1.clone()),
    }
}

/// Measures the first particle in basis `b1`.
///
/// Returns the observed label `c1` and the normalized state left on the
/// second particle.
pub fn measure_first<R: Rng + ?Sized>(
    field: &Field,
    pair: &EntangledPair,
    b1: &BasisId,
    rng: &mut R,
) -> (GfElem, StateVec) {
    measure_first_in(field, pair, &mub_basis(field, b1), rng)
}

/// [`measure_first`] against precomputed basis states, ordered by c index.
pub fn measure_first_in<R: Rng + ?Sized>(
    field: &Field,
    pair: &EntangledPair,
    basis: &[StateVec],
    rng: &mut R,
) -> (GfElem, StateVec) {
    let branches: Vec<StateVec> = basis
        .iter()
        .map(|bra| project_first(&pair.state, bra).expect("pair has dimension d²"))
        .collect();
    let weights: Vec<f64> = branches.iter().map(StateVec::norm_sqr).collect();
    let k = sample_weighted(&weights, rng);
    let c1 = field.from_index(k).expect("outcome below d");
    (c1, branches[k].normalized())
}

/// Applies ω^{tr(λ n)} to amplitude n, sending `|1;b,c⟩` to `|1;b,c+λ⟩`.
pub fn shift_remote(field: &Field, state: &StateVec, lambda: &GfElem) -> StateVec {
    let phases: Vec<Complex64> = field
        .elements()
        .map(|n| omega_pow((lambda * &n).trace(), field.p()))
        .collect();
    apply_diag_phase(state, &phases).expect("phases are unimodular and sized d")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JointOutcome {
    /// Projected onto `|2;b,c⟩`.
    Label(GfElem),
    /// Projected onto the orthogonal complement of the span.
    Complement,
}

/// Projective measurement onto `{|2;b,c⟩ : c}` plus the complement.
#[derive(Debug, Clone)]
pub struct JointMeasurement {
    field: Field,
    b: GfElem,
    pair_states: Vec<StateVec>,
}

impl JointMeasurement {
    pub fn new(field: &Field, b: &GfElem) -> Self {
        let pair_states = field
            .elements()
            .map(|c| entangled_mub(field, &PairLabel::new(b.clone(), c)).state)
            .collect();
        JointMeasurement {
            field: field.clone(),
            b: b.clone(),
            pair_states,
        }
    }

    pub fn b(&self) -> &GfElem {
        &self.b
    }

    pub fn pair_states(&self) -> &[StateVec] {
        &self.pair_states
    }

    /// Outcome probabilities: one per label c, then the complement.
    pub fn probabilities(&self, state: &StateVec) -> Vec<f64> {
        let norm = state.norm_sqr();
        let mut probs: Vec<f64> = self
            .pair_states
            .iter()
            .map(|v| inner_unchecked(v, state).norm_sqr() / norm)
            .collect();
        let rest = 1.0 - probs.iter().sum::<f64>();
        probs.push(rest.max(0.0));
        probs
    }

    /// Samples an outcome and returns the Lüders post-measurement state.
    pub fn measure<R: Rng + ?Sized>(&self, state: &StateVec, rng: &mut R) -> (JointOutcome, StateVec) {
        let d = self.field.d();
        assert_eq!(state.dim(), d * d, "joint measurement acts on d² dimensions");
        let overlaps: Vec<Complex64> = self
            .pair_states
            .iter()
            .map(|v| inner_unchecked(v, state))
            .collect();
        let k = sample_weighted(&self.probabilities(state), rng);
        if k < d {
            let post = self.pair_states[k].scale(overlaps[k] / overlaps[k].norm());
            let c = self.field.from_index(k).expect("outcome below d");
            (JointOutcome::Label(c), post)
        } else {
            let mut rest = state.amps().to_vec();
            for (v, o) in self.pair_states.iter().zip(&overlaps) {
                for (r, a) in rest.iter_mut().zip(v.amps()) {
                    *r -= o * a;
                }
            }
            (JointOutcome::Complement, StateVec::new(rest).normalized())
        }
    }
}

/// Nondestructive measurement of the pair label c within family `b`.
pub fn joint_c_measure<R: Rng + ?Sized>(
    field: &Field,
    state: &StateVec,
    b: &GfElem,
    rng: &mut R,
) -> (JointOutcome, StateVec) {
    JointMeasurement::new(field, b).measure(state, rng)
}

/// Checks ω^{tr[(b1+b2)n² + (c1+c2)n]} = ω^{tr[b1 n² + c1 n]} ω^{tr[b2 n² + c2 n]}
/// for every n.
pub fn exponent_additivity_check(
    field: &Field,
    b1: &GfElem,
    c1: &GfElem,
    b2: &GfElem,
    c2: &GfElem,
) -> bool {
    let p = field.p();
    let b = b1 + b2;
    let c = c1 + c2;
    field.elements().all(|n| {
        let joint = omega_pow(quadratic_exponent(&b, &c, &n), p);
        let split = omega_pow(quadratic_exponent(b1, c1, &n), p)
            * omega_pow(quadratic_exponent(b2, c2, &n), p);
        (joint - split).norm() < ALGEBRAIC_TOL
    })
}
