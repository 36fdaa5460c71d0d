//! Well-ordered supports, regions of the exponent group, and families of
//! supports together with checks of the closure conditions on families.
//!
//! The conditions are referred to by their usual short names:
//!
//! | name | statement |
//! |------|-----------|
//! | S1 | every singleton `{g}` is a member |
//! | S2 | subsets of members are members |
//! | S3 | unions of two members are members |
//! | S4 | `{0}` is a member |
//! | S5 | the family is nonempty |
//! | S6 | initial segments of members are members |
//! | A1 | the union of all members generates `G` |
//! | A2 | `A ⊕ B` is a member for members `A`, `B` |
//! | A3 | translates `A + g` of members are members |
//! | A4 | for members `A ⊆ G^{>=0}`, all finite sums `⊕_n A` form a member |
//! | A5 | `{g}` a member implies `{-g}` a member |

mod conditions;
mod family;
mod regions;
mod witnesses;

use std::fmt;

use thiserror::Error;

use crate::exponents::{GroupDescriptor, GroupElement, GroupError};
use crate::series::{Horizon, SeriesError};
use crate::sums::enumerate_finite_sums;

pub use conditions::{check_all_conditions, check_condition, CheckBudget, Condition, Verdict, Witness};
pub use family::{family_contains, FamilyDescriptor, Membership};
pub use regions::{submonoid_contains, RegionDescriptor};
pub use witnesses::{build_group_witnesses, subset_witness, union_witness, GroupWitnesses};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SupportError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("finite sums need nonnegative elements, found {0}")]
    NotInNonNegCone(GroupElement),
    #[error("term budget of {term_bound} exhausted")]
    TermBudgetExceeded { term_bound: usize },
    #[error("the witness construction needs a field other than F2")]
    FieldTooSmall,
    #[error("this operation needs explicit finite sets")]
    NotExplicit,
    #[error("{0} is not an element of the larger set")]
    NotInSuperset(GroupElement),
}

/// A well-ordered subset of `G`, either given explicitly or known through an
/// increasing enumeration up to an exponent bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportSet {
    /// Sorted, without duplicates.
    ExplicitFinite(Vec<GroupElement>),
    /// Every element `<= exp_bound`, in increasing order, for a set that is
    /// not known to be finite. When `complete` is false the budget ran out and
    /// the prefix is exact only up to its last element.
    BoundedEnumeration { prefix: Vec<GroupElement>, exp_bound: GroupElement, complete: bool },
}

impl SupportSet {
    pub fn finite(elements: impl IntoIterator<Item = GroupElement>) -> Self {
        let mut v: Vec<GroupElement> = elements.into_iter().collect();
        v.sort();
        v.dedup();
        SupportSet::ExplicitFinite(v)
    }

    pub fn empty() -> Self {
        SupportSet::ExplicitFinite(Vec::new())
    }

    pub fn singleton(g: GroupElement) -> Self {
        SupportSet::ExplicitFinite(vec![g])
    }

    /// The explicit elements, or the enumerated prefix.
    pub fn elements(&self) -> &[GroupElement] {
        match self {
            SupportSet::ExplicitFinite(v) => v,
            SupportSet::BoundedEnumeration { prefix, .. } => prefix,
        }
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self, SupportSet::ExplicitFinite(_))
    }

    pub fn is_empty(&self) -> bool {
        self.is_explicit() && self.elements().is_empty()
    }

    pub fn min(&self) -> Option<&GroupElement> {
        self.elements().first()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements().binary_search(g).is_ok()
    }

    fn check_group(&self, group: GroupDescriptor) -> Result<(), SupportError> {
        match self.elements().iter().find(|g| !g.belongs_to(group)) {
            None => Ok(()),
            Some(g) => Err(GroupError::Mismatch { expected: group, found: g.descriptor() }.into()),
        }
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.elements().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        match self {
            SupportSet::ExplicitFinite(_) => write!(f, "}}"),
            SupportSet::BoundedEnumeration { exp_bound, .. } => write!(f, ",... (<= {exp_bound})}}"),
        }
    }
}

/// `{a + b : a in A, b in B}`. Explicit inputs give an explicit result; an
/// enumerated input gives the sums up to the horizon.
pub fn minkowski_sum(a: &SupportSet, b: &SupportSet, h: &Horizon) -> Result<SupportSet, SupportError> {
    if let (SupportSet::ExplicitFinite(x), SupportSet::ExplicitFinite(y)) = (a, b) {
        return Ok(SupportSet::finite(x.iter().flat_map(|p| y.iter().map(move |q| p + q))));
    }
    let (Some(ma), Some(mb)) = (a.min(), b.min()) else {
        return Ok(SupportSet::empty());
    };
    // A must be known up to bound - min(B), and symmetrically
    let need_a = &h.exp_bound - mb;
    let need_b = &h.exp_bound - ma;
    for (s, need) in [(a, &need_a), (b, &need_b)] {
        if let SupportSet::BoundedEnumeration { exp_bound, complete, .. } = s {
            if !complete || exp_bound < need {
                return Err(SupportError::TermBudgetExceeded { term_bound: h.term_bound });
            }
        }
    }
    let mut sums: Vec<GroupElement> = a
        .elements()
        .iter()
        .flat_map(|p| b.elements().iter().map(move |q| p + q))
        .filter(|g| g <= &h.exp_bound)
        .collect();
    sums.sort();
    sums.dedup();
    if sums.len() > h.term_bound {
        return Err(SupportError::TermBudgetExceeded { term_bound: h.term_bound });
    }
    Ok(SupportSet::BoundedEnumeration { prefix: sums, exp_bound: h.exp_bound.clone(), complete: true })
}

/// `A + g`.
pub fn translate(a: &SupportSet, g: &GroupElement) -> SupportSet {
    match a {
        SupportSet::ExplicitFinite(v) => SupportSet::ExplicitFinite(v.iter().map(|x| x + g).collect()),
        SupportSet::BoundedEnumeration { prefix, exp_bound, complete } => SupportSet::BoundedEnumeration {
            prefix: prefix.iter().map(|x| x + g).collect(),
            exp_bound: exp_bound + g,
            complete: *complete,
        },
    }
}

/// All finite sums of elements of `A` up to the horizon; the empty sum
/// contributes `0`, so `⊕ ∅ = {0}`.
pub fn finite_sums_closure(a: &SupportSet, h: &Horizon) -> Result<SupportSet, SupportError> {
    if let Some(neg) = a.elements().iter().find(|g| g.is_negative()) {
        return Err(SupportError::NotInNonNegCone(neg.clone()));
    }
    let group = h.exp_bound.descriptor();
    a.check_group(group)?;
    let positive: Vec<GroupElement> = a.elements().iter().filter(|g| g.is_positive()).cloned().collect();
    if positive.is_empty() {
        if let SupportSet::BoundedEnumeration { complete: false, .. } = a {
            return Err(SupportError::TermBudgetExceeded { term_bound: h.term_bound });
        }
        return Ok(SupportSet::singleton(group.zero()));
    }
    if let SupportSet::BoundedEnumeration { exp_bound, complete, .. } = a {
        if !complete || exp_bound < &h.exp_bound {
            return Err(SupportError::TermBudgetExceeded { term_bound: h.term_bound });
        }
    }
    let (sums, complete) = enumerate_finite_sums(&positive, &h.exp_bound, h.term_bound);
    if !complete {
        return Err(SupportError::TermBudgetExceeded { term_bound: h.term_bound });
    }
    Ok(SupportSet::BoundedEnumeration { prefix: sums, exp_bound: h.exp_bound.clone(), complete: true })
}

/// Whether `B` is an initial segment of `A`: `B ⊆ A` and nothing in `A \ B`
/// lies below an element of `B`. Enumerated sets are compared up to the
/// horizon.
pub fn is_initial_segment(b: &SupportSet, a: &SupportSet, h: &Horizon) -> Result<bool, SupportError> {
    for s in [a, b] {
        if let SupportSet::BoundedEnumeration { exp_bound, complete, .. } = s {
            if !complete || exp_bound < &h.exp_bound {
                return Err(SupportError::TermBudgetExceeded { term_bound: h.term_bound });
            }
        }
    }
    let within = |s: &SupportSet| -> Vec<GroupElement> {
        if s.is_explicit() {
            s.elements().to_vec()
        } else {
            s.elements().iter().filter(|g| *g <= &h.exp_bound).cloned().collect()
        }
    };
    let (xb, xa) = (within(b), within(a));
    Ok(xb.len() <= xa.len() && xa[..xb.len()] == xb[..])
}
