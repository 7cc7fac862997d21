//! The invariant suite behind `mubqkd verify`.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::entangle::{entangled_mub, exponent_additivity_check, shift_remote, PairLabel};
use crate::gf::{Field, GfElem};
use crate::hilbert::{project_first, StateVec, ACCUMULATED_TOL, ALGEBRAIC_TOL};
use crate::mub::{mub_state, unbiasedness_report, MubLabel, UnbiasednessReport};
use crate::phasespace::{dwigner1, dwigner2_support, SUPPORT_TOL};
use crate::protocol::session_rng;

/// Largest d for which projection and shift identities are checked
/// exhaustively; above it they are sampled.
pub const EXHAUSTIVE_LIMIT: usize = 9;
pub const SAMPLED_TUPLES: usize = 1000;
/// Single-particle Wigner lines are checked for prime d up to this.
pub const WIGNER1_LIMIT: usize = 31;
/// Two-particle Wigner support is checked for prime d up to this.
pub const WIGNER2_LIMIT: usize = 7;

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub p: u32,
    pub n: u32,
    pub d: usize,
    pub modulus: Vec<u32>,
    pub trace_additive: bool,
    pub trace_balanced: bool,
    pub unbiasedness: UnbiasednessReport,
    pub projection_tuples: usize,
    pub projection_max_error: f64,
    pub projection_max_norm_error: f64,
    pub shift_tuples: usize,
    pub shift_max_error: f64,
    pub additivity_holds: bool,
    pub epr_max_error: f64,
    /// `None` when the check does not apply (n > 1) or d is above the limit.
    pub wigner_line_max_error: Option<f64>,
    pub wigner_pair_support_ok: Option<bool>,
    pub passed: bool,
}

fn trace_checks(field: &Field) -> (bool, bool) {
    let els: Vec<GfElem> = field.elements().collect();
    let traces: Vec<u32> = els.iter().map(GfElem::trace).collect();
    let p = field.p();
    let additive = els.iter().enumerate().all(|(i, a)| {
        els.iter()
            .enumerate()
            .all(|(j, b)| (a + b).trace() == (traces[i] + traces[j]) % p)
    });
    let mut fibers = vec![0usize; p as usize];
    for t in &traces {
        fibers[*t as usize] += 1;
    }
    let balanced = fibers.iter().all(|&f| f == field.d() / p as usize);
    (additive, balanced)
}

fn tuples<R: Rng>(field: &Field, arity: usize, rng: &mut R) -> Vec<Vec<GfElem>> {
    let d = field.d();
    if d <= EXHAUSTIVE_LIMIT {
        let total = d.pow(arity as u32);
        (0..total)
            .map(|mut k| {
                (0..arity)
                    .map(|_| {
                        let e = field.from_index(k % d).unwrap();
                        k /= d;
                        e
                    })
                    .collect()
            })
            .collect()
    } else {
        (0..SAMPLED_TUPLES)
            .map(|_| {
                (0..arity)
                    .map(|_| field.from_index(rng.random_range(0..d)).unwrap())
                    .collect()
            })
            .collect()
    }
}

/// Worst componentwise error of `⟨1;b1,c1|2;b,c⟩ = d^{-1/2}|1;b-b1,c-c1⟩`,
/// and worst |‖·‖² - 1/d|.
pub fn projection_errors(field: &Field, b: &GfElem, c: &GfElem, b1: &GfElem, c1: &GfElem) -> (f64, f64) {
    let d = field.d() as f64;
    let pair = entangled_mub(field, &PairLabel::new(b.clone(), c.clone()));
    let bra = mub_state(field, &MubLabel::quadratic(b1.clone(), c1.clone()));
    let w = project_first(&pair.state, &bra).expect("dims match");
    let expected = mub_state(field, &MubLabel::quadratic(b - b1, c - c1))
        .scale(Complex64::new(1.0 / d.sqrt(), 0.0));
    (
        w.max_abs_diff(&expected).expect("dims match"),
        (w.norm_sqr() - 1.0 / d).abs(),
    )
}

/// Error of `shift_remote(|1;b,c⟩, λ) = |1;b,c+λ⟩`.
pub fn shift_error(field: &Field, b: &GfElem, c: &GfElem, lambda: &GfElem) -> f64 {
    let s = mub_state(field, &MubLabel::quadratic(b.clone(), c.clone()));
    let target = mub_state(field, &MubLabel::quadratic(b.clone(), c + lambda));
    shift_remote(field, &s, lambda)
        .max_abs_diff(&target)
        .expect("dims match")
}

/// Max deviation of a quadratic state's Wigner table from the indicator of
/// `p = 2bq + c` scaled by 1/d, over all (b, c); computational states must
/// give vertical lines.
pub fn wigner_line_error(field: &Field) -> f64 {
    let d = field.d();
    let inv_d = 1.0 / d as f64;
    let mut worst = 0.0f64;
    for b in 0..d {
        for c in 0..d {
            let label = MubLabel::quadratic(field.scalar(b as u32), field.scalar(c as u32));
            let w = dwigner1(&mub_state(field, &label), d).expect("odd prime d");
            for q in 0..d {
                for p in 0..d {
                    let on_line = p == (2 * b * q + c) % d;
                    let target = if on_line { inv_d } else { 0.0 };
                    worst = worst.max((w.get(q, p) - target).abs());
                }
            }
            worst = worst.max((w.sum() - 1.0).abs());
        }
    }
    for n in 0..d {
        let w = dwigner1(&StateVec::basis_vector(d, n), d).expect("odd prime d");
        for q in 0..d {
            for p in 0..d {
                let target = if q == n { inv_d } else { 0.0 };
                worst = worst.max((w.get(q, p) - target).abs());
            }
        }
    }
    worst
}

/// Whether every `|2;b,c⟩` has support exactly `{q1 = q2, p1 + p2 = 2bq1 + c}`
/// with values 1/d².
pub fn wigner_pair_support_ok(field: &Field) -> bool {
    let d = field.d();
    let target = 1.0 / (d * d) as f64;
    for b in 0..d {
        for c in 0..d {
            let label = PairLabel::new(field.scalar(b as u32), field.scalar(c as u32));
            let support = dwigner2_support(&entangled_mub(field, &label).state, d).expect("odd prime d");
            if support.len() != d * d {
                return false;
            }
            for (&(q1, p1, q2, p2), &v) in &support.points {
                if q1 != q2 || (p1 + p2) % d != (2 * b * q1 + c) % d || (v - target).abs() > SUPPORT_TOL {
                    return false;
                }
            }
        }
    }
    true
}

/// Runs every invariant for one field. `seed` drives the sampled checks.
pub fn run(field: &Field, seed: u64) -> VerifyReport {
    let d = field.d();
    let mut rng = session_rng(seed, 0);
    let (trace_additive, trace_balanced) = trace_checks(field);
    let unbiasedness = unbiasedness_report(field);

    let proj = tuples(field, 4, &mut rng);
    let (mut proj_err, mut proj_norm_err) = (0.0f64, 0.0f64);
    for t in &proj {
        let (e, n) = projection_errors(field, &t[0], &t[1], &t[2], &t[3]);
        proj_err = proj_err.max(e);
        proj_norm_err = proj_norm_err.max(n);
    }

    let shifts = tuples(field, 3, &mut rng);
    let shift_err = shifts
        .iter()
        .map(|t| shift_error(field, &t[0], &t[1], &t[2]))
        .fold(0.0, f64::max);

    let additivity_holds = tuples(field, 4, &mut rng)
        .iter()
        .all(|t| exponent_additivity_check(field, &t[0], &t[1], &t[2], &t[3]));

    let epr = entangled_mub(field, &PairLabel::new(field.zero(), field.zero()));
    let epr_target = 1.0 / (d as f64).sqrt();
    let epr_max_error = epr
        .state
        .amps()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let expected = if i / d == i % d { epr_target } else { 0.0 };
            (a - Complex64::new(expected, 0.0)).norm()
        })
        .fold(0.0, f64::max);

    let prime = field.n() == 1;
    let wigner_line_max_error = (prime && d <= WIGNER1_LIMIT).then(|| wigner_line_error(field));
    let wigner_pair_support_ok = (prime && d <= WIGNER2_LIMIT).then(|| wigner_pair_support_ok(field));

    let passed = trace_additive
        && trace_balanced
        && unbiasedness.within(ACCUMULATED_TOL, ALGEBRAIC_TOL)
        && proj_err < ALGEBRAIC_TOL
        && proj_norm_err < ALGEBRAIC_TOL
        && shift_err < ALGEBRAIC_TOL
        && additivity_holds
        && epr_max_error < ALGEBRAIC_TOL
        && wigner_line_max_error.map_or(true, |e| e < SUPPORT_TOL)
        && wigner_pair_support_ok.unwrap_or(true);

    VerifyReport {
        p: field.p(),
        n: field.n(),
        d,
        modulus: field.modulus().to_vec(),
        trace_additive,
        trace_balanced,
        unbiasedness,
        projection_tuples: proj.len(),
        projection_max_error: proj_err,
        projection_max_norm_error: proj_norm_err,
        shift_tuples: shifts.len(),
        shift_max_error: shift_err,
        additivity_holds,
        epr_max_error,
        wigner_line_max_error,
        wigner_pair_support_ok,
        passed,
    }
}
