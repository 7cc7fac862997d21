//! Dense pure-state vectors and the handful of operations the simulator needs.
//!
//! Two-particle vectors of dimension d² use the index convention
//! `idx = n1 * d + n2`.

use num_complex::Complex64;
use rand::Rng;

/// Tolerance for exact algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for sums accumulated over desk-scale dimensions.
pub const ACCUMULATED_TOL: f64 = 1e-9;
/// Tolerance for basis validation before sampling.
pub const BASIS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HilbertError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("basis has {len} vectors for a space of dimension {dim}")]
    IncompleteBasis { len: usize, dim: usize },
    #[error("basis is not orthonormal (Gram deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },
    #[error("phase at index {index} has modulus {modulus}, expected 1")]
    NotUnimodular { index: usize, modulus: f64 },
    #[error("state has squared norm {norm_sqr}, expected 1")]
    NotNormalized { norm_sqr: f64 },
    #[error("cannot sample from the zero vector")]
    ZeroState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVec {
    amps: Vec<Complex64>,
}

impl StateVec {
    pub fn new(amps: Vec<Complex64>) -> Self {
        StateVec { amps }
    }

    pub fn zeros(dim: usize) -> Self {
        StateVec {
            amps: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// Standard basis vector e_k.
    pub fn basis_vector(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.amps[k] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < ALGEBRAIC_TOL
    }

    pub fn scale(&self, factor: Complex64) -> StateVec {
        StateVec::new(self.amps.iter().map(|a| a * factor).collect())
    }

    /// Copy rescaled to unit norm; the zero vector is returned unchanged.
    pub fn normalized(&self) -> StateVec {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        self.scale(Complex64::new(1.0 / n, 0.0))
    }

    /// Largest componentwise distance |u_k - v_k|.
    pub fn max_abs_diff(&self, other: &StateVec) -> Result<f64, HilbertError> {
        check_dims(self, other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

fn check_dims(u: &StateVec, v: &StateVec) -> Result<(), HilbertError> {
    if u.dim() != v.dim() {
        return Err(HilbertError::DimMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    Ok(())
}

/// ⟨u|v⟩ = Σ conj(u_k) v_k.
pub fn inner(u: &StateVec, v: &StateVec) -> Result<Complex64, HilbertError> {
    check_dims(u, v)?;
    Ok(inner_unchecked(u, v))
}

pub(crate) fn inner_unchecked(u: &StateVec, v: &StateVec) -> Complex64 {
    u.amps.iter().zip(&v.amps).map(|(a, b)| a.conj() * b).sum()
}

pub fn tensor(u: &StateVec, v: &StateVec) -> StateVec {
    let mut amps = Vec::with_capacity(u.dim() * v.dim());
    for a in &u.amps {
        amps.extend(v.amps.iter().map(|b| a * b));
    }
    StateVec::new(amps)
}

/// Largest deviation of the Gram matrix of `basis` from the identity.
pub fn gram_deviation(basis: &[StateVec]) -> f64 {
    let mut worst = 0.0f64;
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate().skip(i) {
            let expected = if i == j { 1.0 } else { 0.0 };
            let g = inner_unchecked(u, v);
            worst = worst.max((g - Complex64::new(expected, 0.0)).norm());
        }
    }
    worst
}

/// Checks that `basis` is an orthonormal basis of a `dim`-dimensional space.
pub fn validate_basis(basis: &[StateVec], dim: usize) -> Result<(), HilbertError> {
    if basis.len() != dim {
        return Err(HilbertError::IncompleteBasis {
            len: basis.len(),
            dim,
        });
    }
    if let Some(v) = basis.iter().find(|v| v.dim() != dim) {
        return Err(HilbertError::DimMismatch {
            left: v.dim(),
            right: dim,
        });
    }
    let deviation = gram_deviation(basis);
    if deviation > BASIS_TOL {
        return Err(HilbertError::NotOrthonormal { deviation });
    }
    Ok(())
}

/// Draws an index from unnormalized weights.
pub(crate) fn sample_weighted<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (k, w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return k;
        }
    }
    // Rounding can leave `target` at the very top; take the last non-zero weight.
    weights
        .iter()
        .rposition(|&w| w > 0.0)
        .unwrap_or(weights.len() - 1)
}

/// Born-rule measurement of `state` in `basis`.
///
/// Returns the outcome index and the collapsed state, which is the basis
/// vector itself.
pub fn born_sample<R: Rng + ?Sized>(
    state: &StateVec,
    basis: &[StateVec],
    rng: &mut R,
) -> Result<(usize, StateVec), HilbertError> {
    validate_basis(basis, state.dim())?;
    let weights = born_probabilities_unchecked(state, basis);
    if weights.iter().sum::<f64>() == 0.0 {
        return Err(HilbertError::ZeroState);
    }
    let k = sample_weighted(&weights, rng);
    Ok((k, basis[k].clone()))
}

/// |⟨basis_k|state⟩|² for every k, normalized by ‖state‖².
pub fn born_probabilities(state: &StateVec, basis: &[StateVec]) -> Result<Vec<f64>, HilbertError> {
    validate_basis(basis, state.dim())?;
    let norm = state.norm_sqr();
    if norm == 0.0 {
        return Err(HilbertError::ZeroState);
    }
    Ok(born_probabilities_unchecked(state, basis)
        .into_iter()
        .map(|w| w / norm)
        .collect())
}

fn born_probabilities_unchecked(state: &StateVec, basis: &[StateVec]) -> Vec<f64> {
    basis
        .iter()
        .map(|b| inner_unchecked(b, state).norm_sqr())
        .collect()
}

/// Contracts the first particle of a d²-dimensional `pair` with `bra`.
///
/// The result is unnormalized: `w[n2] = Σ_{n1} conj(bra[n1]) pair[n1*d + n2]`
/// and ‖w‖² is the probability of the `bra` outcome.
pub fn project_first(pair: &StateVec, bra: &StateVec) -> Result<StateVec, HilbertError> {
    let d = bra.dim();
    if pair.dim() != d * d {
        return Err(HilbertError::DimMismatch {
            left: pair.dim(),
            right: d * d,
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); d];
    for (n1, b) in bra.amps.iter().enumerate() {
        let bc = b.conj();
        if bc == Complex64::new(0.0, 0.0) {
            continue;
        }
        let row = &pair.amps[n1 * d..(n1 + 1) * d];
        for (w, a) in out.iter_mut().zip(row) {
            *w += bc * a;
        }
    }
    Ok(StateVec::new(out))
}

/// Multiplies amplitude k by `phases[k]`; every phase must have modulus 1.
pub fn apply_diag_phase(state: &StateVec, phases: &[Complex64]) -> Result<StateVec, HilbertError> {
    if phases.len() != state.dim() {
        return Err(HilbertError::DimMismatch {
            left: state.dim(),
            right: phases.len(),
        });
    }
    for (index, ph) in phases.iter().enumerate() {
        let modulus = ph.norm();
        if (modulus - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(HilbertError::NotUnimodular { index, modulus });
        }
    }
    Ok(StateVec::new(
        state.amps.iter().zip(phases).map(|(a, ph)| a * ph).collect(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwapOutcome {
    Symmetric,
    Antisymmetric,
}

/// Probability that a swap test on `u`, `v` reports antisymmetric.
pub fn swap_antisymmetric_probability(u: &StateVec, v: &StateVec) -> Result<f64, HilbertError> {
    let overlap = inner(u, v)?.norm_sqr();
    Ok(((1.0 - overlap) / 2.0).clamp(0.0, 0.5))
}

/// One swap test. Both inputs are consumed by the measurement.
pub fn swap_test<R: Rng + ?Sized>(
    u: StateVec,
    v: StateVec,
    rng: &mut R,
) -> Result<SwapOutcome, HilbertError> {
    for s in [&u, &v] {
        let norm_sqr = s.norm_sqr();
        if (norm_sqr - 1.0).abs() > ACCUMULATED_TOL {
            return Err(HilbertError::NotNormalized { norm_sqr });
        }
    }
    let p_anti = swap_antisymmetric_probability(&u, &v)?;
    if rng.random::<f64>() < p_anti {
        Ok(SwapOutcome::Antisymmetric)
    } else {
        Ok(SwapOutcome::Symmetric)
    }
}
