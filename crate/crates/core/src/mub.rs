//! The d+1 mutually unbiased bases of a GF(p^n)-labelled qudit.
//!
//! Basis `Quadratic(b)` holds the states
//! `|1;b,c⟩ = d^{-1/2} Σ_n ω^{tr(b n² + c n)} |n⟩` with ω = e^{2πi/p};
//! `Computational` holds the standard basis vectors `|n⟩`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::gf::{Field, GfElem, GfError};
use crate::hilbert::{gram_deviation, inner_unchecked, StateVec};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BasisId {
    Quadratic(GfElem),
    Computational,
}

impl BasisId {
    /// Integer code: `b.index()` for quadratic bases, `d` for the
    /// computational basis.
    pub fn code(&self, field: &Field) -> usize {
        match self {
            BasisId::Quadratic(b) => b.index(),
            BasisId::Computational => field.d(),
        }
    }

    pub fn from_code(field: &Field, code: usize) -> Result<Self, GfError> {
        if code == field.d() {
            Ok(BasisId::Computational)
        } else {
            field.from_index(code).map(BasisId::Quadratic)
        }
    }
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisId::Quadratic(b) => write!(f, "b={b}"),
            BasisId::Computational => write!(f, "computational"),
        }
    }
}

/// Coordinates of one MUB state. For the computational basis `c` is the
/// position label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MubLabel {
    pub basis: BasisId,
    pub c: GfElem,
}

impl MubLabel {
    pub fn quadratic(b: GfElem, c: GfElem) -> Self {
        MubLabel {
            basis: BasisId::Quadratic(b),
            c,
        }
    }

    pub fn computational(n: GfElem) -> Self {
        MubLabel {
            basis: BasisId::Computational,
            c: n,
        }
    }
}

/// e^{2πi t / p}.
pub fn omega_pow(t: u32, p: u32) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * t as f64 / p as f64)
}

/// tr(b n² + c n).
pub fn quadratic_exponent(b: &GfElem, c: &GfElem, n: &GfElem) -> u32 {
    (b * &(n * n) + c * n).trace()
}

/// The unimodular diagonal ω^{tr(b n² + c n)}, indexed by `n.index()`.
pub fn quadratic_phases(field: &Field, b: &GfElem, c: &GfElem) -> Vec<Complex64> {
    field
        .elements()
        .map(|n| omega_pow(quadratic_exponent(b, c, &n), field.p()))
        .collect()
}

pub fn mub_state(field: &Field, label: &MubLabel) -> StateVec {
    match &label.basis {
        BasisId::Computational => StateVec::basis_vector(field.d(), label.c.index()),
        BasisId::Quadratic(b) => {
            let scale = 1.0 / (field.d() as f64).sqrt();
            StateVec::new(
                quadratic_phases(field, b, &label.c)
                    .into_iter()
                    .map(|ph| ph * scale)
                    .collect(),
            )
        }
    }
}

/// The d states of one basis, ordered by `c.index()`.
pub fn mub_basis(field: &Field, basis: &BasisId) -> Vec<StateVec> {
    field
        .elements()
        .map(|c| {
            mub_state(
                field,
                &MubLabel {
                    basis: basis.clone(),
                    c,
                },
            )
        })
        .collect()
}

/// All d+1 basis ids: quadratic bases in index order, then computational.
pub fn all_bases(field: &Field) -> Vec<BasisId> {
    field
        .elements()
        .map(BasisId::Quadratic)
        .chain(std::iter::once(BasisId::Computational))
        .collect()
}

/// Largest deviation of Σ_c |c⟩⟨c| from the identity.
pub fn completeness_deviation(basis: &[StateVec]) -> f64 {
    let dim = basis.first().map_or(0, StateVec::dim);
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let sum: Complex64 = basis.iter().map(|v| v.amps()[i] * v.amps()[j].conj()).sum();
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((sum - expected).norm());
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct UnbiasednessReport {
    pub d: usize,
    pub basis_count: usize,
    /// Unordered pairs of distinct bases compared.
    pub basis_pairs: usize,
    /// max | |⟨u|v⟩| - 1/√d | over all cross-basis state pairs.
    pub max_cross_deviation: f64,
    /// max Gram-matrix deviation from the identity within one basis.
    pub max_intra_deviation: f64,
    pub max_completeness_deviation: f64,
}

impl UnbiasednessReport {
    pub fn within(&self, cross_tol: f64, intra_tol: f64) -> bool {
        self.basis_count == self.d + 1
            && self.max_cross_deviation < cross_tol
            && self.max_intra_deviation < intra_tol
            && self.max_completeness_deviation < intra_tol
    }
}

/// Exhaustive check of every basis pair and every state pair.
pub fn unbiasedness_report(field: &Field) -> UnbiasednessReport {
    let d = field.d();
    let ids = all_bases(field);
    let bases: Vec<Vec<StateVec>> = ids.iter().map(|id| mub_basis(field, id)).collect();
    let target = 1.0 / (d as f64).sqrt();

    let mut max_cross = 0.0f64;
    let mut pairs = 0;
    for (i, first) in bases.iter().enumerate() {
        for second in &bases[i + 1..] {
            pairs += 1;
            for u in first {
                for v in second {
                    let dev = (inner_unchecked(u, v).norm() - target).abs();
                    max_cross = max_cross.max(dev);
                }
            }
        }
    }

    UnbiasednessReport {
        d,
        basis_count: ids.len(),
        basis_pairs: pairs,
        max_cross_deviation: max_cross,
        max_intra_deviation: bases.iter().map(|b| gram_deviation(b)).fold(0.0, f64::max),
        max_completeness_deviation: bases
            .iter()
            .map(|b| completeness_deviation(b))
            .fold(0.0, f64::max),
    }
}
