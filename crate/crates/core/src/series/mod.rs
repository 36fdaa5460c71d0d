//! Generalised power series over `k((G))`.
//!
//! A [`Series`] is an immutable expression DAG. Nothing is computed when a
//! series is built; an [`Evaluator`] expands it exactly up to a [`Horizon`]
//! (an exponent bound plus a per-node budget on the number of support points).
//! Well-ordered supports can have infinitely many points below a bound, so a
//! result records whether it is complete up to the bound or was cut short by
//! the term budget.

mod eval;
mod render;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use thiserror::Error;

use crate::coefficients::{FieldDescriptor, FieldElement, FieldError};
use crate::exponents::{GroupDescriptor, GroupElement, GroupError};

pub use eval::Evaluator;

/// One `(exponent, coefficient)` pair of an expansion.
pub type Term = (GroupElement, FieldElement);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("series domain mismatch: {0} vs {1}")]
    DomainMismatch(Domain, Domain),
    #[error("no nonzero coefficient at or below exponent {bound}")]
    ZeroUpToHorizon { bound: GroupElement },
    #[error("term budget of {term_bound} exhausted before the result could be certified")]
    TermBudgetExceeded { term_bound: usize },
    #[error("geometric tail needs a base with positive valuation, found {vmin}")]
    NonPositiveValuation { vmin: GroupElement },
    #[error("invalid inversion witness {witness}: {reason}")]
    InvalidWitness { witness: GroupElement, reason: &'static str },
    #[error("term bound must be at least 1")]
    ZeroTermBound,
}

/// Exponent group and coefficient field a series lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Domain {
    pub group: GroupDescriptor,
    pub field: FieldDescriptor,
}

impl Domain {
    pub fn new(group: GroupDescriptor, field: FieldDescriptor) -> Self {
        Domain { group, field }
    }

    fn check_exponent(&self, g: &GroupElement) -> Result<(), SeriesError> {
        if g.belongs_to(self.group) {
            Ok(())
        } else {
            Err(GroupError::Mismatch { expected: self.group, found: g.descriptor() }.into())
        }
    }

    fn check_coefficient(&self, c: &FieldElement) -> Result<(), SeriesError> {
        if c.belongs_to(self.field) {
            Ok(())
        } else {
            Err(FieldError::Mismatch(self.field, c.descriptor()).into())
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(({}))", self.field, self.group)
    }
}

/// Evaluation limits: every exponent `<= exp_bound` is expanded, and no node
/// enumerates more than `term_bound` support points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Horizon {
    pub exp_bound: GroupElement,
    pub term_bound: usize,
}

impl Horizon {
    pub fn new(exp_bound: GroupElement, term_bound: usize) -> Result<Self, SeriesError> {
        if term_bound == 0 {
            return Err(SeriesError::ZeroTermBound);
        }
        Ok(Horizon { exp_bound, term_bound })
    }

    pub fn with_bound(&self, exp_bound: GroupElement) -> Self {
        Horizon { exp_bound, term_bound: self.term_bound }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completeness {
    /// Every support point `<= exp_bound` is listed.
    CompleteUpToBound,
    /// The term budget ran out; the list is exact for exponents `<= exact_through`.
    TruncatedByTermBound { exact_through: GroupElement },
}

/// An evaluated prefix of a series: strictly increasing exponents, nonzero
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermList {
    pub terms: Vec<Term>,
    pub completeness: Completeness,
    pub exp_bound: GroupElement,
}

impl TermList {
    pub fn is_complete(&self) -> bool {
        self.completeness == Completeness::CompleteUpToBound
    }

    pub fn exponents(&self) -> Vec<GroupElement> {
        self.terms.iter().map(|(g, _)| g.clone()).collect()
    }

    pub fn coefficient(&self, g: &GroupElement) -> Option<&FieldElement> {
        self.terms.binary_search_by(|(e, _)| e.cmp(g)).ok().map(|i| &self.terms[i].1)
    }

    /// Largest exponent up to which the list is exact.
    pub fn exact_through(&self) -> &GroupElement {
        match &self.completeness {
            Completeness::CompleteUpToBound => &self.exp_bound,
            Completeness::TruncatedByTermBound { exact_through } => exact_through,
        }
    }
}

static NEXT_NODE_ID: AtomicU64 = AtomicU64::new(0);

#[derive(Debug)]
struct Node {
    id: u64,
    domain: Domain,
    kind: NodeKind,
}

#[derive(Debug)]
enum NodeKind {
    Monomial(FieldElement, GroupElement),
    Literal(Vec<Term>),
    Sum(Series, Series),
    Neg(Series),
    Product(Series, Series),
    Inverse {
        child: Series,
        witness: Option<GroupElement>,
    },
    /// `sum_{n >= 0} base^n`, defined when the base has positive valuation.
    GeometricTail(Series),
    Truncate {
        child: Series,
        at: GroupElement,
        inclusive: bool,
    },
}

/// A lazily evaluated element of `k((G))`. Cloning is cheap (shared DAG).
#[derive(Clone)]
pub struct Series(Arc<Node>);

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series({self})")
    }
}

impl Series {
    fn from_kind(domain: Domain, kind: NodeKind) -> Self {
        Series(Arc::new(Node { id: NEXT_NODE_ID.fetch_add(1, AtomicOrdering::Relaxed), domain, kind }))
    }

    fn id(&self) -> u64 {
        self.0.id
    }

    fn kind(&self) -> &NodeKind {
        &self.0.kind
    }

    pub fn domain(&self) -> Domain {
        self.0.domain
    }

    /// `c * t^g`.
    pub fn monomial(
        domain: Domain,
        coefficient: FieldElement,
        exponent: GroupElement,
    ) -> Result<Self, SeriesError> {
        domain.check_coefficient(&coefficient)?;
        domain.check_exponent(&exponent)?;
        Ok(Self::from_kind(domain, NodeKind::Monomial(coefficient, exponent)))
    }

    /// The monic monomial `t^g`.
    pub fn t_pow(domain: Domain, exponent: GroupElement) -> Result<Self, SeriesError> {
        Self::monomial(domain, domain.field.one(), exponent)
    }

    pub fn constant(domain: Domain, c: FieldElement) -> Result<Self, SeriesError> {
        Self::monomial(domain, c, domain.group.zero())
    }

    pub fn zero(domain: Domain) -> Self {
        Self::from_kind(domain, NodeKind::Literal(Vec::new()))
    }

    pub fn one(domain: Domain) -> Self {
        Self::from_kind(domain, NodeKind::Monomial(domain.field.one(), domain.group.zero()))
    }

    /// A finite series from arbitrary terms; duplicates are merged and zero
    /// coefficients dropped.
    pub fn literal(domain: Domain, terms: impl IntoIterator<Item = Term>) -> Result<Self, SeriesError> {
        let mut merged = std::collections::BTreeMap::<GroupElement, FieldElement>::new();
        for (g, c) in terms {
            domain.check_exponent(&g)?;
            domain.check_coefficient(&c)?;
            match merged.get_mut(&g) {
                Some(acc) => *acc = &*acc + &c,
                None => {
                    merged.insert(g, c);
                }
            }
        }
        let terms = merged.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Self::from_kind(domain, NodeKind::Literal(terms)))
    }

    /// Finite series with the given support and every coefficient equal to 1.
    pub fn indicator(domain: Domain, support: &[GroupElement]) -> Result<Self, SeriesError> {
        let one = domain.field.one();
        Self::literal(domain, support.iter().map(|g| (g.clone(), one.clone())))
    }

    /// Re-reads an evaluated prefix as a finite series.
    pub fn from_term_list(domain: Domain, list: &TermList) -> Result<Self, SeriesError> {
        Self::literal(domain, list.terms.iter().cloned())
    }

    fn same_domain(&self, other: &Series) -> Result<(), SeriesError> {
        if self.domain() == other.domain() {
            Ok(())
        } else {
            Err(SeriesError::DomainMismatch(self.domain(), other.domain()))
        }
    }

    pub fn try_add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.same_domain(other)?;
        Ok(Self::from_kind(self.domain(), NodeKind::Sum(self.clone(), other.clone())))
    }

    pub fn try_sub(&self, other: &Series) -> Result<Series, SeriesError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Series) -> Result<Series, SeriesError> {
        self.same_domain(other)?;
        Ok(Self::from_kind(self.domain(), NodeKind::Product(self.clone(), other.clone())))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Series {
        Self::from_kind(self.domain(), NodeKind::Neg(self.clone()))
    }

    /// `sum_{h < g} s_h t^h`.
    pub fn truncate(&self, g: &GroupElement) -> Result<Series, SeriesError> {
        self.truncate_with(g, false)
    }

    /// `sum_{h <= g} s_h t^h`.
    pub fn truncate_inclusive(&self, g: &GroupElement) -> Result<Series, SeriesError> {
        self.truncate_with(g, true)
    }

    fn truncate_with(&self, g: &GroupElement, inclusive: bool) -> Result<Series, SeriesError> {
        self.domain().check_exponent(g)?;
        Ok(Self::from_kind(
            self.domain(),
            NodeKind::Truncate { child: self.clone(), at: g.clone(), inclusive },
        ))
    }

    /// Lazy multiplicative inverse. Without a witness, the leading exponent
    /// is searched for at evaluation time; a witness names it directly.
    pub fn inverse(&self, witness: Option<GroupElement>) -> Result<Series, SeriesError> {
        if let Some(w) = &witness {
            self.domain().check_exponent(w)?;
        }
        Ok(Self::from_kind(self.domain(), NodeKind::Inverse { child: self.clone(), witness }))
    }

    /// `sum_{n >= 0} base^n`. The base must have positive valuation up to the
    /// horizon (a base that is zero up to the horizon is accepted).
    pub fn geometric_tail(base: &Series, horizon: &Horizon) -> Result<Series, SeriesError> {
        match vmin(base, horizon) {
            Ok(v) if !v.is_positive() => return Err(SeriesError::NonPositiveValuation { vmin: v }),
            Ok(_) | Err(SeriesError::ZeroUpToHorizon { .. }) => {}
            Err(e) => return Err(e),
        }
        Ok(Self::from_kind(base.domain(), NodeKind::GeometricTail(base.clone())))
    }
}

impl std::ops::Add for &Series {
    type Output = Series;

    /// Panics on a domain mismatch; see [`Series::try_add`].
    fn add(self, rhs: &Series) -> Series {
        self.try_add(rhs).expect("series domain mismatch")
    }
}

impl std::ops::Sub for &Series {
    type Output = Series;

    fn sub(self, rhs: &Series) -> Series {
        self.try_sub(rhs).expect("series domain mismatch")
    }
}

impl std::ops::Mul for &Series {
    type Output = Series;

    fn mul(self, rhs: &Series) -> Series {
        self.try_mul(rhs).expect("series domain mismatch")
    }
}

impl std::ops::Neg for &Series {
    type Output = Series;

    fn neg(self) -> Series {
        Series::neg(self)
    }
}

pub fn ser_add(a: &Series, b: &Series) -> Result<Series, SeriesError> {
    a.try_add(b)
}

pub fn ser_neg(a: &Series) -> Series {
    a.neg()
}

pub fn ser_mul(a: &Series, b: &Series) -> Result<Series, SeriesError> {
    a.try_mul(b)
}

pub fn truncate(s: &Series, g: &GroupElement) -> Result<Series, SeriesError> {
    s.truncate(g)
}

pub fn coefficients_up_to(s: &Series, h: &Horizon) -> Result<TermList, SeriesError> {
    Evaluator::new(s.domain(), h.clone())?.term_list(s)
}

/// Least support exponent `<= h.exp_bound`.
pub fn vmin(s: &Series, h: &Horizon) -> Result<GroupElement, SeriesError> {
    Evaluator::new(s.domain(), h.clone())?.vmin(s)
}

pub fn support_up_to(s: &Series, h: &Horizon) -> Result<Vec<GroupElement>, SeriesError> {
    Ok(coefficients_up_to(s, h)?.exponents())
}

/// Coefficientwise comparison up to the horizon. Both expansions must be
/// complete; a truncated side raises `TermBudgetExceeded`.
pub fn equal_up_to(a: &Series, b: &Series, h: &Horizon) -> Result<bool, SeriesError> {
    a.same_domain(b)?;
    let mut ev = Evaluator::new(a.domain(), h.clone())?;
    let (la, lb) = (ev.term_list(a)?, ev.term_list(b)?);
    if !la.is_complete() || !lb.is_complete() {
        return Err(SeriesError::TermBudgetExceeded { term_bound: h.term_bound });
    }
    Ok(la.terms == lb.terms)
}

/// Coefficient of `t^g`, computed with the horizon's term budget.
pub fn coefficient_at(s: &Series, g: &GroupElement, h: &Horizon) -> Result<FieldElement, SeriesError> {
    Evaluator::new(s.domain(), h.clone())?.coefficient_at(s, g)
}

/// `b = lead * t^g0 * (1 - epsilon)` with `supp(epsilon)` inside `G^{>0}`.
#[derive(Debug, Clone)]
pub struct InversionFactorization {
    pub g0: GroupElement,
    pub lead: FieldElement,
    pub epsilon: Series,
}

pub fn factorize_for_inversion(b: &Series, h: &Horizon) -> Result<InversionFactorization, SeriesError> {
    factorize_with_witness(b, h, None)
}

pub fn factorize_with_witness(
    b: &Series,
    h: &Horizon,
    witness: Option<GroupElement>,
) -> Result<InversionFactorization, SeriesError> {
    let domain = b.domain();
    let mut ev = Evaluator::new(domain, h.clone())?;
    let (g0, lead) = ev.leading_term(b, witness.as_ref(), &h.exp_bound)?;
    let neg_lead_inv = lead.inv()?.negated();
    // epsilon = -(lead^-1) t^-g0 (b - lead t^g0)
    let head = Series::monomial(domain, lead.clone(), g0.clone())?;
    let scale = Series::monomial(domain, neg_lead_inv, g0.negated())?;
    let epsilon = &scale * &(b - &head);
    Ok(InversionFactorization { g0, lead, epsilon })
}

/// `b^-1 = lead^-1 t^-g0 sum_n epsilon^n`, built from the factorization.
pub fn invert(b: &Series, h: &Horizon) -> Result<Series, SeriesError> {
    invert_with_witness(b, h, None)
}

pub fn invert_with_witness(
    b: &Series,
    h: &Horizon,
    witness: Option<GroupElement>,
) -> Result<Series, SeriesError> {
    let f = factorize_with_witness(b, h, witness)?;
    let domain = b.domain();
    let prefactor = Series::monomial(domain, f.lead.inv()?, f.g0.negated())?;
    let tail = Series::from_kind(domain, NodeKind::GeometricTail(f.epsilon));
    Ok(&prefactor * &tail)
}
