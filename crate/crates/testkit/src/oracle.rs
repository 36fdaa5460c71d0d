//! Dense truncated Laurent series over `Q` or `F_p`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficient arithmetic for the oracle.
pub trait Coef: Clone + PartialEq + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn of_int(&self, v: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Self;
    fn is_zero(&self) -> bool;
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn int(v: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Coef for Rat {
    fn zero_like(&self) -> Self {
        Rat(BigRational::zero())
    }
    fn one_like(&self) -> Self {
        Rat(BigRational::one())
    }
    fn of_int(&self, v: i64) -> Self {
        Rat::int(v)
    }
    fn add(&self, o: &Self) -> Self {
        Rat(&self.0 + &o.0)
    }
    fn sub(&self, o: &Self) -> Self {
        Rat(&self.0 - &o.0)
    }
    fn mul(&self, o: &Self) -> Self {
        Rat(&self.0 * &o.0)
    }
    fn inv(&self) -> Self {
        assert!(!self.0.is_zero(), "oracle: inverse of zero");
        Rat(self.0.recip())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// A residue modulo a small prime.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Modp {
    pub v: u64,
    pub p: u64,
}

impl Modp {
    pub fn new(v: i64, p: u64) -> Self {
        Modp { v: v.rem_euclid(p as i64) as u64, p }
    }
}

impl fmt::Display for Modp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Coef for Modp {
    fn zero_like(&self) -> Self {
        Modp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Modp { v: 1 % self.p, p: self.p }
    }
    fn of_int(&self, v: i64) -> Self {
        Modp::new(v, self.p)
    }
    fn add(&self, o: &Self) -> Self {
        Modp { v: (self.v + o.v) % self.p, p: self.p }
    }
    fn sub(&self, o: &Self) -> Self {
        Modp { v: (self.v + self.p - o.v) % self.p, p: self.p }
    }
    fn mul(&self, o: &Self) -> Self {
        Modp { v: self.v * o.v % self.p, p: self.p }
    }
    fn inv(&self) -> Self {
        assert!(self.v != 0, "oracle: inverse of zero");
        // Fermat: v^(p-2)
        let (mut base, mut e, mut acc) = (self.v, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        Modp { v: acc, p: self.p }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
}

/// Coefficients of `t^offset, t^(offset+1), .., t^top`. Everything above
/// `top` is unknown; everything below `offset` is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense<C> {
    pub offset: i64,
    pub coeffs: Vec<C>,
    pub zero: C,
}

impl<C: Coef> Dense<C> {
    pub fn zero(zero: C, offset: i64, top: i64) -> Self {
        let n = (top - offset + 1).max(0) as usize;
        Dense { offset, coeffs: vec![zero.clone(); n], zero }
    }

    pub fn top(&self) -> i64 {
        self.offset + self.coeffs.len() as i64 - 1
    }

    pub fn get(&self, e: i64) -> C {
        assert!(e <= self.top(), "oracle: coefficient {e} above the known range {}", self.top());
        if e < self.offset {
            self.zero.clone()
        } else {
            self.coeffs[(e - self.offset) as usize].clone()
        }
    }

    /// Nonzero terms up to `bound`.
    pub fn terms(&self, bound: i64) -> Vec<(i64, C)> {
        (self.offset..=bound.min(self.top()))
            .map(|e| (e, self.get(e)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// The lowest exponent with a nonzero coefficient, if any is known.
    pub fn valuation(&self) -> Option<i64> {
        self.terms(self.top()).first().map(|(e, _)| *e)
    }

    pub fn add(&self, o: &Self) -> Self {
        let (lo, top) = (self.offset.min(o.offset), self.top().min(o.top()));
        let mut out = Dense::zero(self.zero.clone(), lo, top);
        for e in lo..=top {
            out.coeffs[(e - lo) as usize] = self.get(e).add(&o.get(e));
        }
        out
    }

    pub fn neg(&self) -> Self {
        Dense {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| self.zero.sub(c)).collect(),
            zero: self.zero.clone(),
        }
    }

    /// Schoolbook product; known up to `min(top_a + off_b, top_b + off_a)`.
    pub fn mul(&self, o: &Self) -> Self {
        let lo = self.offset + o.offset;
        let top = (self.top() + o.offset).min(o.top() + self.offset);
        let mut out = Dense::zero(self.zero.clone(), lo, top);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                let e = lo + (i + j) as i64;
                if e > top {
                    break;
                }
                let k = (e - lo) as usize;
                out.coeffs[k] = out.coeffs[k].add(&a.mul(b));
            }
        }
        out
    }

    /// Long division `1 / self`, known up to `top - 2v` where `v` is the
    /// valuation. Panics on a series with no known nonzero coefficient.
    pub fn inverse(&self) -> Self {
        let v = self.valuation().expect("oracle: inverse of a series with no known term");
        let lead_inv = self.get(v).inv();
        let n = self.top() - v; // unit part u = self / t^v known for exponents 0..=n
        let u: Vec<C> = (0..=n).map(|k| self.get(v + k)).collect();
        let mut w: Vec<C> = Vec::with_capacity(u.len());
        for k in 0..=n as usize {
            let mut acc = if k == 0 { self.zero.one_like() } else { self.zero.clone() };
            for j in 1..=k {
                acc = acc.sub(&u[j].mul(&w[k - j]));
            }
            w.push(acc.mul(&lead_inv));
        }
        Dense { offset: -v, coeffs: w, zero: self.zero.clone() }
    }

    /// Terms with exponent strictly below `at`.
    pub fn truncate(&self, at: i64) -> Self {
        let mut out = self.clone();
        for e in self.offset..=self.top() {
            if e >= at {
                out.coeffs[(e - self.offset) as usize] = self.zero.clone();
            }
        }
        out
    }

    /// Same series, with knowledge extended to `top` (all zeros) when the
    /// series is a polynomial known to have no more terms.
    pub fn extended(&self, top: i64) -> Self {
        let mut out = self.clone();
        while out.top() < top {
            out.coeffs.push(self.zero.clone());
        }
        out
    }

    /// `c0*t^e0 + c1*t^e1 + ..` in the `hahn` text format.
    pub fn render(&self, bound: i64) -> String {
        render_terms(&self.terms(bound))
    }
}

/// Canonical text of a list of terms, matching the command-line output.
pub fn render_terms<C: Coef>(terms: &[(i64, C)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in terms.iter().enumerate() {
        let s = c.to_string();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if *e == 0 {
            out.push_str(&body);
        } else {
            out.push_str(&format!("{body}*t^({e})"));
        }
    }
    out
}

/// Sign of a rational, for tests that need it.
pub fn is_negative(r: &Rat) -> bool {
    r.0.is_negative()
}
