//! Phase-space pictures of the MUB states.
//!
//! The continuous-variable states are never sampled as amplitude arrays.
//! They live here as exact `(b, c)` labels and their lines `p = b q + c`.
//! The finite side is checked numerically with the odd-prime discrete Wigner
//! function
//!
//! ```text
//! W(q, p) = (1/d) Σ_u ψ(q + u/2) conj ψ(q - u/2) ω^{-p u}
//! ```
//!
//! where `u/2` uses the inverse of 2 mod d. Because the finite states carry
//! `b n²` rather than `(b/2) n²`, a state `|1;b,c⟩` sits on the line
//! `p = 2 b q + c`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::gf::is_prime;
use crate::hilbert::{StateVec, ACCUMULATED_TOL, ALGEBRAIC_TOL};
use crate::mub::omega_pow;

/// Entries with |W| at or below this are treated as zero.
pub const SUPPORT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PhaseSpaceError {
    #[error("vertical (position) label has no finite slope to split")]
    VerticalLabel,
    #[error("labels lie in different bases")]
    DifferentBasis,
    #[error("discrete Wigner functions need an odd prime dimension, got {0}")]
    NotOddPrime(usize),
    #[error("state dimension {got} does not match {expected}")]
    DimMismatch { got: usize, expected: usize },
    #[error("state has squared norm {0}, expected 1")]
    NotNormalized(f64),
}

/// Slope of a continuous MUB family; `Vertical` is the position basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CvSlope {
    Finite(f64),
    Vertical,
}

/// Label `(b, c)` of the continuous state with `(p̂ - b x̂)|ψ⟩ = c|ψ⟩`.
/// For `Vertical`, `c` is the position eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvLabel {
    pub b: CvSlope,
    pub c: f64,
}

impl CvLabel {
    pub fn new(b: f64, c: f64) -> Self {
        CvLabel {
            b: CvSlope::Finite(b),
            c,
        }
    }

    pub fn position(x: f64) -> Self {
        CvLabel {
            b: CvSlope::Vertical,
            c: x,
        }
    }

    pub fn line(&self) -> CvLine {
        match self.b {
            CvSlope::Finite(b) => CvLine::Sloped {
                slope: b,
                intercept: self.c,
            },
            CvSlope::Vertical => CvLine::Vertical { q: self.c },
        }
    }
}

/// Support line of a continuous MUB state's Wigner function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CvLine {
    /// p = slope * q + intercept
    Sloped { slope: f64, intercept: f64 },
    /// q = const
    Vertical { q: f64 },
}

impl CvLine {
    pub fn label(&self) -> CvLabel {
        match *self {
            CvLine::Sloped { slope, intercept } => CvLabel::new(slope, intercept),
            CvLine::Vertical { q } => CvLabel::position(q),
        }
    }
}

impl From<CvLabel> for CvLine {
    fn from(label: CvLabel) -> Self {
        label.line()
    }
}

/// Label left on the partner after measuring `(b1, c1)` on the first
/// particle: `(b - b1, c - c1)`.
pub fn cv_split(label: CvLabel, b1: f64, c1: f64) -> Result<CvLabel, PhaseSpaceError> {
    match label.b {
        CvSlope::Finite(b) => Ok(CvLabel::new(b - b1, label.c - c1)),
        CvSlope::Vertical => Err(PhaseSpaceError::VerticalLabel),
    }
}

/// Effect of `e^{iλx̂}`: `(b, c) ↦ (b, c + λ)`. A position eigenstate only
/// picks up a phase, so its label is unchanged.
pub fn cv_shift(label: CvLabel, lambda: f64) -> CvLabel {
    match label.b {
        CvSlope::Finite(_) => CvLabel {
            b: label.b,
            c: label.c + lambda,
        },
        CvSlope::Vertical => label,
    }
}

/// Symbolic `δ(c1 - c2)` between two states of the same basis.
pub fn cv_equal_delta(l1: CvLabel, l2: CvLabel) -> Result<bool, PhaseSpaceError> {
    let same_basis = match (l1.b, l2.b) {
        (CvSlope::Finite(a), CvSlope::Finite(b)) => (a - b).abs() < ALGEBRAIC_TOL,
        (CvSlope::Vertical, CvSlope::Vertical) => true,
        _ => false,
    };
    if !same_basis {
        return Err(PhaseSpaceError::DifferentBasis);
    }
    Ok((l1.c - l2.c).abs() < ALGEBRAIC_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Intersection {
    Point { q: f64, p: f64 },
    /// Parallel, distinct lines.
    None,
    /// The same line.
    Degenerate,
}

pub fn cv_intersect(l1: CvLine, l2: CvLine) -> Intersection {
    use CvLine::*;
    match (l1, l2) {
        (
            Sloped {
                slope: b1,
                intercept: c1,
            },
            Sloped {
                slope: b2,
                intercept: c2,
            },
        ) => {
            if b1 == b2 {
                if c1 == c2 {
                    Intersection::Degenerate
                } else {
                    Intersection::None
                }
            } else {
                let q = (c2 - c1) / (b1 - b2);
                Intersection::Point { q, p: b1 * q + c1 }
            }
        }
        (Vertical { q }, Sloped { slope, intercept }) | (Sloped { slope, intercept }, Vertical { q }) => {
            Intersection::Point {
                q,
                p: slope * q + intercept,
            }
        }
        (Vertical { q: a }, Vertical { q: b }) => {
            if a == b {
                Intersection::Degenerate
            } else {
                Intersection::None
            }
        }
    }
}

fn check_odd_prime(d: usize) -> Result<(), PhaseSpaceError> {
    if d % 2 == 1 && d <= u32::MAX as usize && is_prime(d as u32) {
        Ok(())
    } else {
        Err(PhaseSpaceError::NotOddPrime(d))
    }
}

fn check_state(state: &StateVec, expected: usize) -> Result<(), PhaseSpaceError> {
    if state.dim() != expected {
        return Err(PhaseSpaceError::DimMismatch {
            got: state.dim(),
            expected,
        });
    }
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > ACCUMULATED_TOL {
        return Err(PhaseSpaceError::NotNormalized(norm));
    }
    Ok(())
}

/// Discrete Wigner table of a single qudit, indexed `(q, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteWigner {
    d: usize,
    values: Vec<f64>,
}

impl DiscreteWigner {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, q: usize, p: usize) -> f64 {
        self.values[q * self.d + p]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Σ_p W(q, p), which equals |ψ(q)|².
    pub fn q_marginal(&self) -> Vec<f64> {
        self.values.chunks(self.d).map(|row| row.iter().sum()).collect()
    }

    /// Σ_q W(q, p).
    pub fn p_marginal(&self) -> Vec<f64> {
        (0..self.d)
            .map(|p| (0..self.d).map(|q| self.get(q, p)).sum())
            .collect()
    }

    /// Points with |W| > [`SUPPORT_TOL`], in `(q, p)` lexicographic order.
    pub fn support(&self) -> Vec<(usize, usize, f64)> {
        (0..self.d)
            .flat_map(|q| (0..self.d).map(move |p| (q, p)))
            .map(|(q, p)| (q, p, self.get(q, p)))
            .filter(|&(_, _, v)| v.abs() > SUPPORT_TOL)
            .collect()
    }
}

/// Single-qudit discrete Wigner function at odd prime `d`.
pub fn dwigner1(state: &StateVec, d: usize) -> Result<DiscreteWigner, PhaseSpaceError> {
    check_odd_prime(d)?;
    check_state(state, d)?;
    let half = (d + 1) / 2;
    let psi = state.amps();
    let phase: Vec<Complex64> = (0..d).map(|k| omega_pow(k as u32, d as u32)).collect();
    let mut values = vec![0.0; d * d];
    for q in 0..d {
        for p in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for u in 0..d {
                let hu = half * u % d;
                let plus = (q + hu) % d;
                let minus = (q + d - hu) % d;
                // ω^{-p u}
                let k = (d - p * u % d) % d;
                acc += psi[plus] * psi[minus].conj() * phase[k];
            }
            debug_assert!(acc.im.abs() < 1e-9, "Wigner entry not real: {acc}");
            values[q * d + p] = acc.re / d as f64;
        }
    }
    Ok(DiscreteWigner { d, values })
}

/// Non-negligible entries of a two-qudit Wigner function, keyed
/// `(q1, p1, q2, p2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairWignerSupport {
    pub d: usize,
    pub points: BTreeMap<(usize, usize, usize, usize), f64>,
}

impl PairWignerSupport {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Two-qudit Wigner function of a d²-dimensional state (`idx = n1*d + n2`),
/// reduced to its support.
pub fn dwigner2_support(state: &StateVec, d: usize) -> Result<PairWignerSupport, PhaseSpaceError> {
    check_odd_prime(d)?;
    check_state(state, d * d)?;
    let half = (d + 1) / 2;
    let psi = state.amps();
    let phase: Vec<Complex64> = (0..d).map(|k| omega_pow(k as u32, d as u32)).collect();
    let norm = 1.0 / (d * d) as f64;
    let mut points = BTreeMap::new();
    for q1 in 0..d {
        for q2 in 0..d {
            // Kernel products depend only on (q1, q2, u1, u2); reuse across p.
            let mut kernel = vec![Complex64::new(0.0, 0.0); d * d];
            for u1 in 0..d {
                let h1 = half * u1 % d;
                for u2 in 0..d {
                    let h2 = half * u2 % d;
                    let plus = ((q1 + h1) % d) * d + (q2 + h2) % d;
                    let minus = ((q1 + d - h1) % d) * d + (q2 + d - h2) % d;
                    kernel[u1 * d + u2] = psi[plus] * psi[minus].conj();
                }
            }
            if kernel.iter().all(|k| k.norm() == 0.0) {
                continue;
            }
            for p1 in 0..d {
                for p2 in 0..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for u1 in 0..d {
                        for u2 in 0..d {
                            let k = (2 * d * d - p1 * u1 - p2 * u2) % d;
                            acc += kernel[u1 * d + u2] * phase[k];
                        }
                    }
                    let value = acc.re * norm;
                    if value.abs() > SUPPORT_TOL {
                        points.insert((q1, p1, q2, p2), value);
                    }
                }
            }
        }
    }
    Ok(PairWignerSupport { d, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::mub::{mub_state, MubLabel};

    #[test]
    fn split_and_shift() {
        let l = CvLabel::new(1.5, 0.7);
        let s = cv_split(l, 0.5, 0.2).unwrap();
        assert_eq!(s.b, CvSlope::Finite(1.0));
        assert!((s.c - 0.5).abs() < ALGEBRAIC_TOL);
        assert_eq!(cv_split(l, 0.0, 0.0).unwrap(), l);
        match s.b {
            CvSlope::Finite(b) => assert_eq!(CvLabel::new(b + 0.5, s.c + 0.2), l),
            CvSlope::Vertical => unreachable!(),
        }
        assert_eq!(
            cv_split(CvLabel::position(1.0), 0.0, 0.0),
            Err(PhaseSpaceError::VerticalLabel)
        );

        assert_eq!(cv_shift(l, 0.0), l);
        assert_eq!(cv_shift(CvLabel::new(2.0, 0.3), 0.2).c, 0.5);
        let twice = cv_shift(cv_shift(CvLabel::new(2.0, 0.25), 0.5), 1.25);
        assert_eq!(twice, CvLabel::new(2.0, 2.0));
        assert_eq!(cv_shift(CvLabel::position(3.0), 1.0), CvLabel::position(3.0));
    }

    #[test]
    fn equal_delta() {
        let shifted = cv_shift(CvLabel::new(1.0, 0.3), 0.2);
        assert!(cv_equal_delta(CvLabel::new(1.0, 0.5), shifted).unwrap());
        assert!(!cv_equal_delta(CvLabel::new(1.0, 0.5), CvLabel::new(1.0, 0.4)).unwrap());
        assert_eq!(
            cv_equal_delta(CvLabel::new(1.0, 0.5), CvLabel::new(2.0, 0.5)),
            Err(PhaseSpaceError::DifferentBasis)
        );
    }

    #[test]
    fn protocol_label_algebra() {
        let (b, c) = (0.8, 2.5);
        let (b1, c1, c1p) = (0.3, -1.25, 4.0);
        let bob = cv_split(CvLabel::new(b, c), b1, c1).unwrap();
        let bob_p = cv_split(CvLabel::new(b, c), b1, c1p).unwrap();
        assert!(cv_equal_delta(bob, cv_shift(bob_p, c1p - c1)).unwrap());
        assert!(!cv_equal_delta(bob, cv_shift(bob_p, c1p - c1 + 0.5)).unwrap());
    }

    #[test]
    fn intersections() {
        let l = |b, c| CvLabel::new(b, c).line();
        assert_eq!(
            cv_intersect(l(1.0, 0.0), l(2.0, 3.0)),
            Intersection::Point { q: -3.0, p: -3.0 }
        );
        assert_eq!(cv_intersect(l(1.0, 0.0), l(1.0, 5.0)), Intersection::None);
        assert_eq!(cv_intersect(l(1.0, 5.0), l(1.0, 5.0)), Intersection::Degenerate);
        assert_eq!(
            cv_intersect(CvLine::Vertical { q: 2.0 }, l(1.0, 0.0)),
            Intersection::Point { q: 2.0, p: 2.0 }
        );
        assert_eq!(
            cv_intersect(CvLine::Vertical { q: 2.0 }, CvLine::Vertical { q: 1.0 }),
            Intersection::None
        );
    }

    #[test]
    fn line_label_bijection() {
        for label in [CvLabel::new(-2.0, 0.5), CvLabel::position(1.5)] {
            assert_eq!(label.line().label(), label);
        }
    }

    #[test]
    fn wigner_position_state_is_vertical() {
        let w = dwigner1(&StateVec::basis_vector(3, 1), 3).unwrap();
        let support: Vec<_> = w.support().iter().map(|&(q, p, _)| (q, p)).collect();
        assert_eq!(support, vec![(1, 0), (1, 1), (1, 2)]);
        for (_, _, v) in w.support() {
            assert!((v - 1.0 / 3.0).abs() < SUPPORT_TOL);
        }
    }

    #[test]
    fn wigner_b1_line_has_slope_two_b() {
        let f = Field::new(3, 1).unwrap();
        let s = mub_state(&f, &MubLabel::quadratic(f.one(), f.zero()));
        let w = dwigner1(&s, 3).unwrap();
        let support: Vec<_> = w.support().iter().map(|&(q, p, _)| (q, p)).collect();
        assert_eq!(support, vec![(0, 0), (1, 2), (2, 1)]);
        assert!((w.sum() - 1.0).abs() < ACCUMULATED_TOL);
    }

    #[test]
    fn wigner_rejects_bad_inputs() {
        let s = StateVec::basis_vector(9, 0);
        assert_eq!(dwigner1(&s, 9), Err(PhaseSpaceError::NotOddPrime(9)));
        assert_eq!(
            dwigner1(&StateVec::basis_vector(2, 0), 2),
            Err(PhaseSpaceError::NotOddPrime(2))
        );
        assert!(matches!(
            dwigner1(&StateVec::basis_vector(3, 0), 5),
            Err(PhaseSpaceError::DimMismatch { .. })
        ));
        assert!(matches!(
            dwigner1(&StateVec::zeros(3), 3),
            Err(PhaseSpaceError::NotNormalized(_))
        ));
        assert_eq!(
            dwigner2_support(&StateVec::basis_vector(16, 0), 4),
            Err(PhaseSpaceError::NotOddPrime(4))
        );
    }
}
