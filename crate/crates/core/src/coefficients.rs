//! Exact coefficient fields: `Q`, `F_p` and the rational function field
//! `F_p(x)`.
//!
//! Elements carry enough of their field (the modulus) to do arithmetic on
//! their own. Mixing fields panics in the operator impls and is reported as
//! [`FieldError::Mismatch`] by the `checked_*` methods.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Moduli are kept below `2^32` so residue products fit in `u64`.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("coefficient field mismatch: {0} vs {1}")]
    Mismatch(FieldDescriptor, FieldDescriptor),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("{0} is not an ordered field")]
    Unordered(FieldDescriptor),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldDescriptor {
    Rationals,
    PrimeField(u64),
    /// `F_p(x)`.
    RationalFunctions(u64),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldDescriptor {
    pub fn prime_field(p: u64) -> Result<Self, FieldError> {
        if p <= MAX_MODULUS && is_prime(p) {
            Ok(FieldDescriptor::PrimeField(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn rational_functions(p: u64) -> Result<Self, FieldError> {
        Self::prime_field(p).map(|_| FieldDescriptor::RationalFunctions(p))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldDescriptor::Rationals => 0,
            FieldDescriptor::PrimeField(p) | FieldDescriptor::RationalFunctions(p) => p,
        }
    }

    pub fn is_f2(self) -> bool {
        self == FieldDescriptor::PrimeField(2)
    }

    /// Whether the field is declared large enough for the cardinality route
    /// of the ring characterization. `Q` and `F_p(x)` are countably infinite,
    /// hence at least as large as every well-ordered subset of a countable
    /// exponent group; finite fields are not.
    pub fn is_large(self) -> bool {
        !matches!(self, FieldDescriptor::PrimeField(_))
    }

    pub fn zero(self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> FieldElement {
        match self {
            FieldDescriptor::Rationals => FieldElement::Rat(BigRational::from_integer(v.into())),
            FieldDescriptor::PrimeField(p) => {
                FieldElement::Mod { value: v.rem_euclid(p as i64) as u64, modulus: p }
            }
            FieldDescriptor::RationalFunctions(p) => {
                FieldElement::RatFn(RatFn::from_poly(FpPoly::constant(v.rem_euclid(p as i64) as u64, p)))
            }
        }
    }

    /// `numer / denom` mapped into the field.
    pub fn from_ratio(self, numer: &BigInt, denom: &BigInt) -> Result<FieldElement, FieldError> {
        if denom.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        match self {
            FieldDescriptor::Rationals => {
                Ok(FieldElement::Rat(BigRational::new(numer.clone(), denom.clone())))
            }
            FieldDescriptor::PrimeField(p) | FieldDescriptor::RationalFunctions(p) => {
                let reduce = |n: &BigInt| -> i64 {
                    let r = n % BigInt::from(p);
                    let r: i64 = r.try_into().expect("residue fits in i64");
                    r.rem_euclid(p as i64)
                };
                let n = self.from_i64(reduce(numer));
                let d = self.from_i64(reduce(denom));
                Ok(n.checked_mul(&d.inv()?)?)
            }
        }
    }

    /// The indeterminate `x` of `F_p(x)`.
    pub fn variable(self) -> Option<FieldElement> {
        match self {
            FieldDescriptor::RationalFunctions(p) => {
                Some(FieldElement::RatFn(RatFn::from_poly(FpPoly::monomial(1, p))))
            }
            _ => None,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::PrimeField(p) => write!(f, "F{p}"),
            FieldDescriptor::RationalFunctions(p) => write!(f, "F{p}(x)"),
        }
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2)
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Polynomial over `F_p`, coefficients little-endian with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    coeffs: Vec<u64>,
    p: u64,
}

impl FpPoly {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> Self {
        coeffs.iter_mut().for_each(|c| *c %= p);
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { coeffs, p }
    }

    pub fn constant(c: u64, p: u64) -> Self {
        Self::new(vec![c], p)
    }

    pub fn monomial(degree: usize, p: u64) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = 1;
        Self::new(coeffs, p)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| self.coeffs.get(i).copied().unwrap_or(0) + other.coeffs.get(i).copied().unwrap_or(0))
            .collect();
        Self::new(c, self.p)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|&c| (self.p - c) % self.p).collect(), self.p)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new(), self.p);
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % self.p;
            }
        }
        Self::new(c, self.p)
    }

    pub fn scale(&self, k: u64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * k % self.p).collect(), self.p)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let p = self.p;
        let mut rem = self.coeffs.clone();
        let dd = divisor.coeffs.len() - 1;
        let inv_lead = mod_inv(divisor.lead(), p);
        let mut quot = vec![0u64; rem.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let factor = rem[rem.len() - 1] * inv_lead % p;
            quot[shift] = factor;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = (rem[shift + i] + p - factor * d % p) % p;
            }
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        (Self::new(quot, p), Self::new(rem, p))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(mod_inv(self.lead(), self.p))
    }

    fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (d, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}*x")?,
                (d, 1) => write!(f, "x^{d}")?,
                (d, c) => write!(f, "{c}*x^{d}")?,
            }
        }
        Ok(())
    }
}

/// Reduced fraction `num / den` over `F_p` with `den` monic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: FpPoly,
    den: FpPoly,
}

impl RatFn {
    pub fn new(num: FpPoly, den: FpPoly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let p = num.p;
        if num.is_zero() {
            return Ok(RatFn { num, den: FpPoly::constant(1, p) });
        }
        let g = num.gcd(&den);
        let (mut num, _) = num.div_rem(&g);
        let (mut den, _) = den.div_rem(&g);
        let scale = mod_inv(den.lead(), p);
        num = num.scale(scale);
        den = den.scale(scale);
        Ok(RatFn { num, den })
    }

    pub fn from_poly(num: FpPoly) -> Self {
        let p = num.p;
        RatFn { num, den: FpPoly::constant(1, p) }
    }

    pub fn numerator(&self) -> &FpPoly {
        &self.num
    }

    pub fn denominator(&self) -> &FpPoly {
        &self.den
    }

    /// Returns `Some(d)` when the function is the monic monomial `x^d`.
    pub fn as_monic_monomial(&self) -> Option<usize> {
        let d = self.num.degree()?;
        (self.den.is_one() && self.num.term_count() == 1 && self.num.lead() == 1).then_some(d)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |poly: &FpPoly| {
            if poly.term_count() > 1
                || (poly.term_count() == 1 && poly.lead() != 1 && poly.degree() != Some(0))
            {
                format!("({poly})")
            } else {
                poly.to_string()
            }
        };
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

/// A coefficient, always in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rat(BigRational),
    Mod { value: u64, modulus: u64 },
    RatFn(RatFn),
}

impl FieldElement {
    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            FieldElement::Rat(_) => FieldDescriptor::Rationals,
            FieldElement::Mod { modulus, .. } => FieldDescriptor::PrimeField(*modulus),
            FieldElement::RatFn(r) => FieldDescriptor::RationalFunctions(r.num.p),
        }
    }

    pub fn belongs_to(&self, field: FieldDescriptor) -> bool {
        self.descriptor() == field
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.descriptor() == other.descriptor() {
            Ok(())
        } else {
            Err(FieldError::Mismatch(self.descriptor(), other.descriptor()))
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rat(a) => a.is_zero(),
            FieldElement::Mod { value, .. } => *value == 0,
            FieldElement::RatFn(r) => r.num.is_zero(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElement::Rat(a), FieldElement::Rat(b)) => FieldElement::Rat(a + b),
            (FieldElement::Mod { value: a, modulus }, FieldElement::Mod { value: b, .. }) => {
                FieldElement::Mod { value: (a + b) % modulus, modulus: *modulus }
            }
            (FieldElement::RatFn(a), FieldElement::RatFn(b)) => FieldElement::RatFn(
                RatFn::new(a.num.mul(&b.den).add(&b.num.mul(&a.den)), a.den.mul(&b.den))
                    .expect("nonzero denominators"),
            ),
            _ => unreachable!(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElement::Rat(a), FieldElement::Rat(b)) => FieldElement::Rat(a * b),
            (FieldElement::Mod { value: a, modulus }, FieldElement::Mod { value: b, .. }) => {
                FieldElement::Mod { value: a * b % modulus, modulus: *modulus }
            }
            (FieldElement::RatFn(a), FieldElement::RatFn(b)) => FieldElement::RatFn(
                RatFn::new(a.num.mul(&b.num), a.den.mul(&b.den)).expect("nonzero denominators"),
            ),
            _ => unreachable!(),
        })
    }

    pub fn negated(&self) -> Self {
        match self {
            FieldElement::Rat(a) => FieldElement::Rat(-a),
            FieldElement::Mod { value, modulus } => {
                FieldElement::Mod { value: (modulus - value) % modulus, modulus: *modulus }
            }
            FieldElement::RatFn(r) => FieldElement::RatFn(RatFn { num: r.num.neg(), den: r.den.clone() }),
        }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(match self {
            FieldElement::Rat(a) => FieldElement::Rat(a.recip()),
            FieldElement::Mod { value, modulus } => {
                FieldElement::Mod { value: mod_inv(*value, *modulus), modulus: *modulus }
            }
            FieldElement::RatFn(r) => FieldElement::RatFn(RatFn::new(r.den.clone(), r.num.clone())?),
        })
    }

    /// `a > 0` in the natural order of `Q`.
    pub fn is_strictly_positive(&self) -> Result<bool, FieldError> {
        match self {
            FieldElement::Rat(a) => Ok(a.is_positive()),
            other => Err(FieldError::Unordered(other.descriptor())),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rat(a) => Some(a),
            _ => None,
        }
    }

    /// `true` for negative rationals; finite-field and function-field
    /// elements never render with a sign.
    pub fn is_negative_rational(&self) -> bool {
        matches!(self, FieldElement::Rat(a) if a.is_negative())
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.checked_add(rhs).expect("coefficient field mismatch")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;

    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.checked_add(&rhs.negated()).expect("coefficient field mismatch")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;

    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.checked_mul(rhs).expect("coefficient field mismatch")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        self.negated()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rat(a) => {
                if a.is_integer() {
                    write!(f, "{}", a.numer())
                } else {
                    write!(f, "{}/{}", a.numer(), a.denom())
                }
            }
            FieldElement::Mod { value, .. } => write!(f, "{value}"),
            FieldElement::RatFn(r) => write!(f, "{r}"),
        }
    }
}

pub fn f_add(a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
    a.checked_add(b)
}

pub fn f_mul(a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
    a.checked_mul(b)
}

pub fn f_neg(a: &FieldElement) -> FieldElement {
    a.negated()
}

pub fn f_inv(a: &FieldElement) -> Result<FieldElement, FieldError> {
    a.inv()
}

pub fn f_is_zero(a: &FieldElement) -> bool {
    a.is_zero()
}

pub fn is_strictly_positive(a: &FieldElement) -> Result<bool, FieldError> {
    a.is_strictly_positive()
}

/// Coefficients handed out by [`independent_coefficients`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSupply {
    pub values: Vec<FieldElement>,
    /// `false` when the field cannot supply the requested independence
    /// (a finite prime field has no infinite independent set).
    pub independent: bool,
}

/// `n` coefficients suitable for the non-cancellation constructions:
/// `1, x, .., x^(n-1)` in `F_p(x)` (linearly independent over `F_p`),
/// `1, 2, .., n` in `Q` (distinct and positive), and residues flagged as
/// dependent in `F_p`.
pub fn independent_coefficients(n: usize, field: FieldDescriptor) -> CoefficientSupply {
    match field {
        FieldDescriptor::Rationals => CoefficientSupply {
            values: (1..=n as i64).map(|i| field.from_i64(i)).collect(),
            independent: true,
        },
        FieldDescriptor::RationalFunctions(p) => CoefficientSupply {
            values: (0..n).map(|d| FieldElement::RatFn(RatFn::from_poly(FpPoly::monomial(d, p)))).collect(),
            independent: true,
        },
        FieldDescriptor::PrimeField(_) => CoefficientSupply {
            values: (1..=n as i64).map(|i| field.from_i64(i)).collect(),
            // a single nonzero residue is independent over F_p, two never are
            independent: n <= 1,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> FieldElement {
        FieldDescriptor::Rationals.from_ratio(&n.into(), &d.into()).unwrap()
    }

    #[test]
    fn field_examples() {
        assert_eq!(f_inv(&q(2, 3)).unwrap(), q(3, 2));
        let f5 = FieldDescriptor::prime_field(5).unwrap();
        assert_eq!(f_mul(&f5.from_i64(3), &f5.from_i64(4)).unwrap(), f5.from_i64(2));
        let f2x = FieldDescriptor::rational_functions(2).unwrap();
        let x = f2x.variable().unwrap();
        let inv = f_inv(&x).unwrap();
        assert_eq!(inv.to_string(), "1/x");
        assert_eq!(f_mul(&x, &inv).unwrap(), f2x.one());
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(f_inv(&q(0, 1)), Err(FieldError::ZeroInverse));
        let f7 = FieldDescriptor::prime_field(7).unwrap();
        assert_eq!(f7.zero().inv(), Err(FieldError::ZeroInverse));
    }

    #[test]
    fn primality_is_checked() {
        assert_eq!(FieldDescriptor::prime_field(9), Err(FieldError::NotPrime(9)));
        assert!(FieldDescriptor::rational_functions(4).is_err());
        assert!(FieldDescriptor::prime_field(13).is_ok());
    }

    #[test]
    fn positivity() {
        assert_eq!(is_strictly_positive(&q(5, 6)), Ok(true));
        assert_eq!(is_strictly_positive(&q(0, 1)), Ok(false));
        let f3 = FieldDescriptor::prime_field(3).unwrap();
        assert_eq!(is_strictly_positive(&f3.from_i64(2)), Err(FieldError::Unordered(f3)));
    }

    #[test]
    fn supplies() {
        let f2x = FieldDescriptor::rational_functions(2).unwrap();
        let s = independent_coefficients(3, f2x);
        assert!(s.independent);
        let rendered: Vec<String> = s.values.iter().map(|v| v.to_string()).collect();
        assert_eq!(rendered, ["1", "x", "x^2"]);
        let s = independent_coefficients(3, FieldDescriptor::Rationals);
        assert_eq!(s.values, vec![q(1, 1), q(2, 1), q(3, 1)]);
        let s = independent_coefficients(2, FieldDescriptor::prime_field(3).unwrap());
        assert!(!s.independent);
    }

    #[test]
    fn rational_function_canonical_form() {
        let p = 3;
        // (x^2 - 1) / (2x - 2) = (x + 1) / 2 = 2x + 2
        let num = FpPoly::new(vec![2, 0, 1], p);
        let den = FpPoly::new(vec![1, 2], p);
        let r = RatFn::new(num, den).unwrap();
        assert_eq!(r.denominator(), &FpPoly::constant(1, p));
        assert_eq!(r.numerator(), &FpPoly::new(vec![2, 2], p));
        let again = RatFn::new(r.numerator().clone(), r.denominator().clone()).unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn display_of_rational_functions() {
        let p = 2;
        let r = RatFn::new(FpPoly::new(vec![1, 0, 1], p), FpPoly::monomial(1, p)).unwrap();
        assert_eq!(r.to_string(), "(x^2+1)/x");
        assert_eq!(r.as_monic_monomial(), None);
        assert_eq!(RatFn::from_poly(FpPoly::monomial(3, p)).as_monic_monomial(), Some(3));
    }
}
