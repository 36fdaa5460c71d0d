//! Ordered abelian groups of exponents.
//!
//! Four groups are shipped: the integers, the rationals, lexicographically
//! ordered integer tuples `Z^n` (`1 <= n <= 8`) and the trivial group `{0}`.
//! All arithmetic is exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported dimension of a lexicographic product.
pub const MAX_LEX_DIMENSION: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("exponent group mismatch: expected {expected}, found {found}")]
    Mismatch { expected: GroupDescriptor, found: GroupDescriptor },
    #[error("lexicographic dimension must be in 1..={MAX_LEX_DIMENSION}, got {0}")]
    BadDimension(usize),
}

/// Which ordered abelian group the exponents live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupDescriptor {
    Integers,
    Rationals,
    /// `Z^n` ordered lexicographically.
    Lex(usize),
    Trivial,
}

impl GroupDescriptor {
    pub fn lex(n: usize) -> Result<Self, GroupError> {
        if (1..=MAX_LEX_DIMENSION).contains(&n) {
            Ok(GroupDescriptor::Lex(n))
        } else {
            Err(GroupError::BadDimension(n))
        }
    }

    pub fn zero(self) -> GroupElement {
        match self {
            GroupDescriptor::Integers => GroupElement::Int(BigInt::zero()),
            GroupDescriptor::Rationals => GroupElement::Rat(BigRational::zero()),
            GroupDescriptor::Lex(n) => GroupElement::Lex(vec![BigInt::zero(); n]),
            GroupDescriptor::Trivial => GroupElement::Trivial,
        }
    }

    pub fn is_trivial(self) -> bool {
        self == GroupDescriptor::Trivial
    }

    /// The smallest positive element when one exists (`1` in `Z`, `(0,..,0,1)`
    /// in `Z^n`); `1` for `Q`, where it is merely a convenient positive element.
    pub fn unit(self) -> Option<GroupElement> {
        match self {
            GroupDescriptor::Integers => Some(GroupElement::Int(BigInt::one())),
            GroupDescriptor::Rationals => Some(GroupElement::Rat(BigRational::one())),
            GroupDescriptor::Lex(n) => {
                let mut v = vec![BigInt::zero(); n];
                v[n - 1] = BigInt::one();
                Some(GroupElement::Lex(v))
            }
            GroupDescriptor::Trivial => None,
        }
    }

    /// A generating set of the group as an abstract group, when it is finitely
    /// generated (`Q` is not).
    pub fn basis(self) -> Option<Vec<GroupElement>> {
        match self {
            GroupDescriptor::Integers => Some(vec![GroupElement::from(1)]),
            GroupDescriptor::Rationals => None,
            GroupDescriptor::Lex(n) => Some(
                (0..n)
                    .map(|i| {
                        let mut v = vec![BigInt::zero(); n];
                        v[i] = BigInt::one();
                        GroupElement::Lex(v)
                    })
                    .collect(),
            ),
            GroupDescriptor::Trivial => Some(Vec::new()),
        }
    }

    /// Embeds an integer as `k * unit`.
    pub fn multiple_of_unit(self, k: i64) -> GroupElement {
        match self.unit() {
            Some(u) => u.scale(&BigInt::from(k)),
            None => GroupElement::Trivial,
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Integers => write!(f, "Z"),
            GroupDescriptor::Rationals => write!(f, "Q"),
            GroupDescriptor::Lex(n) => write!(f, "Z^{n}"),
            GroupDescriptor::Trivial => write!(f, "trivial"),
        }
    }
}

/// An exponent. The derived order is the group order whenever both sides
/// belong to the same descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Int(BigInt),
    Rat(BigRational),
    Lex(Vec<BigInt>),
    Trivial,
}

impl From<i64> for GroupElement {
    fn from(v: i64) -> Self {
        GroupElement::Int(BigInt::from(v))
    }
}

impl GroupElement {
    pub fn rational(numer: i64, denom: i64) -> Self {
        GroupElement::Rat(BigRational::new(numer.into(), denom.into()))
    }

    pub fn tuple(coords: &[i64]) -> Self {
        GroupElement::Lex(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        match self {
            GroupElement::Int(_) => GroupDescriptor::Integers,
            GroupElement::Rat(_) => GroupDescriptor::Rationals,
            GroupElement::Lex(v) => GroupDescriptor::Lex(v.len()),
            GroupElement::Trivial => GroupDescriptor::Trivial,
        }
    }

    pub fn belongs_to(&self, group: GroupDescriptor) -> bool {
        self.descriptor() == group
    }

    fn same_group(&self, other: &Self) -> Result<(), GroupError> {
        if self.descriptor() == other.descriptor() {
            Ok(())
        } else {
            Err(GroupError::Mismatch { expected: self.descriptor(), found: other.descriptor() })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, GroupError> {
        self.same_group(other)?;
        Ok(match (self, other) {
            (GroupElement::Int(a), GroupElement::Int(b)) => GroupElement::Int(a + b),
            (GroupElement::Rat(a), GroupElement::Rat(b)) => GroupElement::Rat(a + b),
            (GroupElement::Lex(a), GroupElement::Lex(b)) => {
                GroupElement::Lex(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => GroupElement::Trivial,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, GroupError> {
        self.checked_add(&other.negated())
    }

    pub fn negated(&self) -> Self {
        match self {
            GroupElement::Int(a) => GroupElement::Int(-a),
            GroupElement::Rat(a) => GroupElement::Rat(-a),
            GroupElement::Lex(a) => GroupElement::Lex(a.iter().map(|x| -x).collect()),
            GroupElement::Trivial => GroupElement::Trivial,
        }
    }

    pub fn checked_cmp(&self, other: &Self) -> Result<Ordering, GroupError> {
        self.same_group(other)?;
        Ok(self.cmp(other))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            GroupElement::Int(a) => a.is_zero(),
            GroupElement::Rat(a) => a.is_zero(),
            GroupElement::Lex(a) => a.iter().all(Zero::is_zero),
            GroupElement::Trivial => true,
        }
    }

    pub fn signum(&self) -> Ordering {
        self.cmp(&self.descriptor().zero())
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.negated()
        } else {
            self.clone()
        }
    }

    /// `k * self`.
    pub fn scale(&self, k: &BigInt) -> Self {
        match self {
            GroupElement::Int(a) => GroupElement::Int(a * k),
            GroupElement::Rat(a) => GroupElement::Rat(a * BigRational::from_integer(k.clone())),
            GroupElement::Lex(a) => GroupElement::Lex(a.iter().map(|x| x * k).collect()),
            GroupElement::Trivial => GroupElement::Trivial,
        }
    }
}

impl Add for &GroupElement {
    type Output = GroupElement;

    /// Panics when the operands belong to different groups; use
    /// [`GroupElement::checked_add`] for a fallible version.
    fn add(self, rhs: &GroupElement) -> GroupElement {
        self.checked_add(rhs).expect("exponent group mismatch")
    }
}

impl Sub for &GroupElement {
    type Output = GroupElement;

    fn sub(self, rhs: &GroupElement) -> GroupElement {
        self.checked_sub(rhs).expect("exponent group mismatch")
    }
}

impl Neg for &GroupElement {
    type Output = GroupElement;

    fn neg(self) -> GroupElement {
        self.negated()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Int(a) => write!(f, "{a}"),
            GroupElement::Rat(a) => {
                if a.is_integer() {
                    write!(f, "{}", a.numer())
                } else {
                    write!(f, "{}/{}", a.numer(), a.denom())
                }
            }
            GroupElement::Lex(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            GroupElement::Trivial => write!(f, "0"),
        }
    }
}

pub fn group_add(g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
    g.checked_add(h)
}

pub fn group_neg(g: &GroupElement) -> GroupElement {
    g.negated()
}

pub fn group_cmp(g: &GroupElement, h: &GroupElement) -> Result<Ordering, GroupError> {
    g.checked_cmp(h)
}

pub fn group_zero(group: GroupDescriptor) -> GroupElement {
    group.zero()
}

/// Echelon basis of a finitely generated subgroup of `Z^n`, obtained by
/// integer row reduction of the generators.
#[derive(Debug, Clone)]
struct Lattice {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Lattice {
    fn from_generators(dim: usize, gens: &[Vec<BigInt>]) -> Self {
        let mut pending: Vec<Vec<BigInt>> =
            gens.iter().filter(|g| g.iter().any(|c| !c.is_zero())).cloned().collect();
        let mut rows = Vec::new();
        for col in 0..dim {
            // Euclid on the column: keep reducing by the smallest nonzero entry.
            loop {
                let pivot = pending
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| !r[col].is_zero())
                    .min_by(|(_, a), (_, b)| a[col].abs().cmp(&b[col].abs()))
                    .map(|(i, _)| i);
                let Some(p) = pivot else { break };
                let pivot_row = pending.swap_remove(p);
                let mut done = true;
                for r in pending.iter_mut() {
                    if r[col].is_zero() {
                        continue;
                    }
                    let q = r[col].div_floor(&pivot_row[col]);
                    for (x, y) in r.iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                    if !r[col].is_zero() {
                        done = false;
                    }
                }
                pending.retain(|r| r.iter().any(|c| !c.is_zero()));
                if done {
                    let mut row = pivot_row;
                    if row[col].is_negative() {
                        row.iter_mut().for_each(|x| *x = -x.clone());
                    }
                    rows.push((col, row));
                    break;
                }
                pending.push(pivot_row);
            }
        }
        Lattice { rows }
    }

    fn contains(&self, v: &[BigInt]) -> bool {
        let mut v = v.to_vec();
        let mut rows = self.rows.iter().peekable();
        for col in 0..v.len() {
            match rows.peek() {
                Some((c, row)) if *c == col => {
                    let (q, r) = v[col].div_rem(&row[col]);
                    if !r.is_zero() {
                        return false;
                    }
                    for (x, y) in v.iter_mut().zip(row) {
                        *x -= &q * y;
                    }
                    rows.next();
                }
                _ => {
                    if !v[col].is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Generator of the cyclic subgroup of `Q` spanned by finitely many rationals
/// (zero when they are all zero).
fn rational_span_generator(gens: &[BigRational]) -> BigRational {
    let lcm = gens.iter().fold(BigInt::one(), |acc, g| acc.lcm(g.denom()));
    let gcd = gens
        .iter()
        .map(|g| (g * BigRational::from_integer(lcm.clone())).to_integer())
        .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
    BigRational::new(gcd, lcm)
}

/// Membership of `g` in the subgroup generated by `generators`.
///
/// The empty generator list generates `{0}`. Generators or `g` from a
/// different group make the answer `false`.
pub fn subgroup_contains(generators: &[GroupElement], g: &GroupElement) -> bool {
    let group = g.descriptor();
    if generators.iter().any(|x| !x.belongs_to(group)) {
        return false;
    }
    match g {
        GroupElement::Trivial => true,
        GroupElement::Int(target) => {
            let d = generators.iter().fold(BigInt::zero(), |acc, x| match x {
                GroupElement::Int(v) => acc.gcd(v),
                _ => acc,
            });
            if d.is_zero() {
                target.is_zero()
            } else {
                target.is_multiple_of(&d)
            }
        }
        GroupElement::Rat(target) => {
            let gens: Vec<BigRational> = generators
                .iter()
                .filter_map(|x| match x {
                    GroupElement::Rat(v) => Some(v.clone()),
                    _ => None,
                })
                .collect();
            let c = rational_span_generator(&gens);
            if c.is_zero() {
                target.is_zero()
            } else {
                (target / c).is_integer()
            }
        }
        GroupElement::Lex(target) => {
            let gens: Vec<Vec<BigInt>> = generators
                .iter()
                .filter_map(|x| match x {
                    GroupElement::Lex(v) => Some(v.clone()),
                    _ => None,
                })
                .collect();
            Lattice::from_generators(target.len(), &gens).contains(target)
        }
    }
}

/// An element of `group` outside the subgroup generated by `generators`, or
/// `None` when they generate the whole group.
pub fn element_outside_subgroup(group: GroupDescriptor, generators: &[GroupElement]) -> Option<GroupElement> {
    match group {
        GroupDescriptor::Trivial => None,
        GroupDescriptor::Rationals => {
            let gens: Vec<BigRational> = generators
                .iter()
                .filter_map(|x| match x {
                    GroupElement::Rat(v) => Some(v.clone()),
                    _ => None,
                })
                .collect();
            let c = rational_span_generator(&gens);
            if c.is_zero() {
                Some(GroupElement::Rat(BigRational::one()))
            } else {
                Some(GroupElement::Rat(c / BigRational::from_integer(2.into())))
            }
        }
        GroupDescriptor::Integers | GroupDescriptor::Lex(_) => {
            group.basis().unwrap_or_default().into_iter().find(|b| !subgroup_contains(generators, b))
        }
    }
}
