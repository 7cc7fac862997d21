//! Arithmetic in GF(p^n) for odd primes p.
//!
//! Elements are coefficient vectors of length `n` over GF(p), lowest order
//! first, reduced modulo a monic irreducible polynomial. The canonical
//! enumeration of the field is `index(a) = sum(a_i * p^i)`; every basis and
//! every transcript in this crate uses that order.

use std::fmt;
use std::ops::{Add, Deref, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GfError {
    #[error("p = {0} is not prime")]
    NotPrime(u32),
    #[error("p = {0} is even; only odd characteristic is supported")]
    EvenCharacteristic(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field size {p}^{n} overflows")]
    TooLarge { p: u32, n: u32 },
    #[error("modulus polynomial {0:?} is not monic of the field degree")]
    ModulusShape(Vec<u32>),
    #[error("modulus coefficient {0} is not reduced mod p")]
    ModulusCoefficient(u32),
    #[error("modulus polynomial {0:?} is reducible over GF(p)")]
    Reducible(Vec<u32>),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("coefficient list {0:?} does not describe a field element")]
    BadCoefficients(Vec<u32>),
    #[error("index {index} out of range for field of size {d}")]
    IndexOutOfRange { index: usize, d: usize },
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = p as u64;
    let mut k = 2u64;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Polynomials over GF(p) as coefficient vectors, lowest order first.
pub(crate) mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p = p as u64;
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    /// Remainder of `a` modulo a monic `m`.
    pub fn rem_monic(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let deg_m = m.len() - 1;
        let p64 = p as u64;
        let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
        while r.len() > deg_m {
            let lead = r.pop().unwrap() % p64;
            if lead == 0 {
                continue;
            }
            let shift = r.len() - deg_m;
            for (k, &mk) in m[..deg_m].iter().enumerate() {
                let sub = lead * mk as u64 % p64;
                r[shift + k] = (r[shift + k] + p64 - sub) % p64;
            }
        }
        trim(r.into_iter().map(|c| c as u32).collect())
    }

    /// Exhaustive check: no monic divisor of degree 1..=deg/2.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let deg = f.len() - 1;
        if deg <= 1 {
            return deg == 1;
        }
        for k in 1..=deg / 2 {
            let mut divisor = vec![0u32; k + 1];
            divisor[k] = 1;
            loop {
                if rem_monic(f, &divisor, p).is_empty() {
                    return false;
                }
                if !increment(&mut divisor[..k], p) {
                    break;
                }
            }
        }
        true
    }

    /// Little-endian odometer over `digits`; false on wrap-around.
    pub fn increment(digits: &mut [u32], p: u32) -> bool {
        for c in digits.iter_mut() {
            *c += 1;
            if *c < p {
                return true;
            }
            *c = 0;
        }
        false
    }
}

/// Smallest monic irreducible polynomial of degree `n` over GF(p).
///
/// Candidates are scanned with the constant term varying fastest, so for
/// `(3, 2)` the order is `x^2, x^2+1, x^2+2, x^2+x, ...`. Returns the full
/// coefficient list including the leading 1.
pub fn find_irreducible(p: u32, n: u32) -> Vec<u32> {
    assert!(n >= 1, "degree must be at least 1");
    let n = n as usize;
    let mut f = vec![0u32; n + 1];
    f[n] = 1;
    loop {
        if poly::is_irreducible(&f, p) {
            return f;
        }
        if !poly::increment(&mut f[..n], p) {
            unreachable!("an irreducible polynomial of every degree exists");
        }
    }
}

/// Parameters of GF(p^n).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    p: u32,
    n: u32,
    modulus: Vec<u32>,
}

/// Config form of a field: `{"p": 3, "n": 2, "modulus": [1, 0, 1]}` with
/// `modulus` optional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub p: u32,
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn new(p: u32, n: u32, modulus: Option<Vec<u32>>) -> Result<Self, GfError> {
        if p % 2 == 0 && p != 0 && is_prime(p) {
            return Err(GfError::EvenCharacteristic(p));
        }
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if n == 0 {
            return Err(GfError::ZeroDegree);
        }
        let d = (p as u64).checked_pow(n).filter(|&d| d <= u32::MAX as u64);
        if d.is_none() {
            return Err(GfError::TooLarge { p, n });
        }
        let modulus = match modulus {
            None => find_irreducible(p, n),
            Some(m) => {
                if m.len() != n as usize + 1 || m[n as usize] != 1 {
                    return Err(GfError::ModulusShape(m));
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(GfError::ModulusCoefficient(c));
                }
                if !poly::is_irreducible(&m, p) {
                    return Err(GfError::Reducible(m));
                }
                m
            }
        };
        Ok(FieldSpec { p, n, modulus })
    }

    pub fn from_config(config: &FieldConfig) -> Result<Self, GfError> {
        Self::new(config.p, config.n, config.modulus.clone())
    }

    pub fn to_config(&self) -> FieldConfig {
        FieldConfig {
            p: self.p,
            n: self.n,
            modulus: Some(self.modulus.clone()),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Monic modulus, lowest order first, length `n + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Field cardinality p^n.
    pub fn d(&self) -> usize {
        (self.p as usize).pow(self.n)
    }
}

/// Shared handle to a field. Elements keep one so that mixing fields is
/// detected.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Field(Arc<FieldSpec>);

impl Deref for Field {
    type Target = FieldSpec;

    fn deref(&self) -> &FieldSpec {
        &self.0
    }
}

impl From<FieldSpec> for Field {
    fn from(spec: FieldSpec) -> Self {
        Field(Arc::new(spec))
    }
}

impl Field {
    /// GF(p^n) with the default modulus from [`find_irreducible`].
    pub fn new(p: u32, n: u32) -> Result<Self, GfError> {
        FieldSpec::new(p, n, None).map(Field::from)
    }

    pub fn with_modulus(p: u32, n: u32, modulus: Vec<u32>) -> Result<Self, GfError> {
        FieldSpec::new(p, n, Some(modulus)).map(Field::from)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0
    }

    fn same(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }

    pub fn zero(&self) -> GfElem {
        GfElem {
            field: self.clone(),
            coeffs: vec![0; self.n as usize],
        }
    }

    pub fn one(&self) -> GfElem {
        let mut e = self.zero();
        e.coeffs[0] = 1;
        e
    }

    /// Element of the prime subfield.
    pub fn scalar(&self, k: u32) -> GfElem {
        let mut e = self.zero();
        e.coeffs[0] = k % self.p;
        e
    }

    /// Element from its low-order-first coefficients.
    pub fn elem(&self, coeffs: &[u32]) -> Result<GfElem, GfError> {
        if coeffs.len() != self.n as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(GfError::BadCoefficients(coeffs.to_vec()));
        }
        Ok(GfElem {
            field: self.clone(),
            coeffs: coeffs.to_vec(),
        })
    }

    pub fn from_index(&self, index: usize) -> Result<GfElem, GfError> {
        let d = self.d();
        if index >= d {
            return Err(GfError::IndexOutOfRange { index, d });
        }
        let p = self.p as usize;
        let mut rest = index;
        let coeffs = (0..self.n)
            .map(|_| {
                let c = (rest % p) as u32;
                rest /= p;
                c
            })
            .collect();
        Ok(GfElem {
            field: self.clone(),
            coeffs,
        })
    }

    /// All d elements in canonical index order.
    pub fn elements(&self) -> impl Iterator<Item = GfElem> + '_ {
        (0..self.d()).map(move |i| self.from_index(i).expect("index below d"))
    }
}

/// An element of GF(p^n).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GfElem {
    field: Field,
    coeffs: Vec<u32>,
}

impl fmt::Debug for GfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GfElem({self})")
    }
}

impl fmt::Display for GfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "ξ".to_string(),
                (1, c) => format!("{c}ξ"),
                (i, 1) => format!("ξ^{i}"),
                (i, c) => format!("{c}ξ^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl GfElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Position in the canonical enumeration, `sum(coeffs[i] * p^i)`.
    pub fn index(&self) -> usize {
        let p = self.field.p as usize;
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c as usize)
    }

    fn check(&self, other: &GfElem) -> Result<(), GfError> {
        if self.field.same(&other.field) {
            Ok(())
        } else {
            Err(GfError::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &GfElem) -> Result<GfElem, GfError> {
        self.check(other)?;
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        Ok(GfElem {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &GfElem) -> Result<GfElem, GfError> {
        self.check(other)?;
        Ok(self.try_add(&-other).expect("same field"))
    }

    pub fn try_mul(&self, other: &GfElem) -> Result<GfElem, GfError> {
        self.check(other)?;
        let p = self.field.p;
        let product = poly::mul(&self.coeffs, &other.coeffs, p);
        let mut coeffs = poly::rem_monic(&product, &self.field.modulus, p);
        coeffs.resize(self.field.n as usize, 0);
        Ok(GfElem {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn pow(&self, mut exp: u64) -> GfElem {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// The Frobenius automorphism a ↦ a^p.
    pub fn frobenius(&self) -> GfElem {
        self.pow(self.field.p as u64)
    }

    pub fn inv(&self) -> Result<GfElem, GfError> {
        if self.is_zero() {
            return Err(GfError::ZeroInverse);
        }
        Ok(self.pow(self.field.d() as u64 - 2))
    }

    /// Absolute trace a + a^p + ... + a^(p^(n-1)) as a residue in [0, p).
    pub fn trace(&self) -> u32 {
        let mut conj = self.clone();
        let mut sum = self.clone();
        for _ in 1..self.field.n {
            conj = conj.frobenius();
            sum = &sum + &conj;
        }
        debug_assert!(
            sum.coeffs[1..].iter().all(|&c| c == 0),
            "trace left the prime subfield"
        );
        sum.coeffs[0]
    }
}

/// Field sum; fails on mismatched fields.
pub fn gf_add(a: &GfElem, b: &GfElem) -> Result<GfElem, GfError> {
    a.try_add(b)
}

/// Field product; fails on mismatched fields.
pub fn gf_mul(a: &GfElem, b: &GfElem) -> Result<GfElem, GfError> {
    a.try_mul(b)
}

pub fn gf_inv(a: &GfElem) -> Result<GfElem, GfError> {
    a.inv()
}

pub fn trace(a: &GfElem) -> u32 {
    a.trace()
}

// Operator forms panic on mismatched fields; the `try_*` methods report it.
macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&GfElem> for &GfElem {
            type Output = GfElem;
            fn $method(self, rhs: &GfElem) -> GfElem {
                self.$try(rhs).expect("field mismatch")
            }
        }
        impl $trait<GfElem> for GfElem {
            type Output = GfElem;
            fn $method(self, rhs: GfElem) -> GfElem {
                (&self).$try(&rhs).expect("field mismatch")
            }
        }
        impl $trait<&GfElem> for GfElem {
            type Output = GfElem;
            fn $method(self, rhs: &GfElem) -> GfElem {
                (&self).$try(rhs).expect("field mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &GfElem {
    type Output = GfElem;
    fn neg(self) -> GfElem {
        let p = self.field.p;
        GfElem {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&c| (p - c) % p).collect(),
        }
    }
}

impl Neg for GfElem {
    type Output = GfElem;
    fn neg(self) -> GfElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf9() -> Field {
        Field::with_modulus(3, 2, vec![1, 0, 1]).unwrap()
    }

    #[test]
    fn prime_field_ops() {
        let f = Field::new(3, 1).unwrap();
        let two = f.scalar(2);
        assert_eq!(gf_add(&two, &two).unwrap(), f.scalar(1));
        assert_eq!(gf_mul(&two, &two).unwrap(), f.scalar(1));
        assert_eq!(gf_inv(&two).unwrap(), two);
        assert_eq!(gf_inv(&f.one()).unwrap(), f.one());
        assert_eq!(trace(&two), 2);
        for a in f.elements() {
            assert_eq!(&a + &f.zero(), a);
            assert_eq!(&a * &f.one(), a);
        }
    }

    #[test]
    fn gf9_examples() {
        let f = gf9();
        let a = f.elem(&[1, 1]).unwrap();
        let b = f.elem(&[2, 2]).unwrap();
        assert_eq!(gf_add(&a, &b).unwrap(), f.zero());
        let xi = f.elem(&[0, 1]).unwrap();
        assert_eq!(gf_mul(&xi, &xi).unwrap(), f.scalar(2));
        assert_eq!(gf_inv(&xi).unwrap(), f.elem(&[0, 2]).unwrap());
        assert_eq!(trace(&xi), 0);
        assert_eq!(trace(&f.one()), 2);
        assert_eq!(xi.pow(3), f.elem(&[0, 2]).unwrap());
    }

    #[test]
    fn irreducible_search() {
        assert_eq!(find_irreducible(3, 1), vec![0, 1]);
        assert_eq!(find_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(find_irreducible(5, 2), vec![2, 0, 1]);
        let cubic = find_irreducible(3, 3);
        assert!(poly::is_irreducible(&cubic, 3));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(Field::new(4, 1).unwrap_err(), GfError::NotPrime(4));
        assert_eq!(Field::new(2, 3).unwrap_err(), GfError::EvenCharacteristic(2));
        assert_eq!(Field::new(1, 1).unwrap_err(), GfError::NotPrime(1));
        assert_eq!(Field::new(3, 0).unwrap_err(), GfError::ZeroDegree);
        assert!(matches!(
            Field::with_modulus(3, 2, vec![2, 0, 1]),
            Err(GfError::Reducible(_))
        ));
        assert!(matches!(
            Field::with_modulus(3, 2, vec![1, 0, 2]),
            Err(GfError::ModulusShape(_))
        ));
        assert!(matches!(
            Field::with_modulus(3, 2, vec![1, 5, 1]),
            Err(GfError::ModulusCoefficient(5))
        ));
    }

    #[test]
    fn mismatched_fields_rejected() {
        let f3 = Field::new(3, 1).unwrap();
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(
            gf_add(&f3.one(), &f5.one()).unwrap_err(),
            GfError::FieldMismatch
        );
        assert_eq!(
            gf_mul(&f3.one(), &f5.one()).unwrap_err(),
            GfError::FieldMismatch
        );
        // Same parameters built separately count as the same field.
        let other = Field::new(3, 1).unwrap();
        assert!(gf_add(&f3.one(), &other.one()).is_ok());
    }

    #[test]
    fn zero_has_no_inverse() {
        let f = gf9();
        assert_eq!(gf_inv(&f.zero()).unwrap_err(), GfError::ZeroInverse);
    }

    #[test]
    fn index_round_trip() {
        for (p, n) in [(3, 1), (3, 2), (5, 2), (3, 3), (3, 4), (7, 1)] {
            let f = Field::new(p, n).unwrap();
            for i in 0..f.d() {
                assert_eq!(f.from_index(i).unwrap().index(), i);
            }
            assert!(f.from_index(f.d()).is_err());
        }
    }

    #[test]
    fn config_round_trip() {
        let json = r#"{"p": 3, "n": 2}"#;
        let cfg: FieldConfig = serde_json::from_str(json).unwrap();
        let spec = FieldSpec::from_config(&cfg).unwrap();
        assert_eq!(spec.modulus(), &[1, 0, 1]);
        let back = serde_json::to_string(&spec.to_config()).unwrap();
        assert_eq!(back, r#"{"p":3,"n":2,"modulus":[1,0,1]}"#);
    }

    #[test]
    fn display() {
        let f = gf9();
        assert_eq!(f.elem(&[1, 2]).unwrap().to_string(), "1+2ξ");
        assert_eq!(f.zero().to_string(), "0");
    }
}
