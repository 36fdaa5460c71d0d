use std::fmt;

use super::{RegionDescriptor, SupportError, SupportSet};
use crate::exponents::{GroupDescriptor, GroupElement, GroupError};

/// A family of supports, described symbolically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyDescriptor {
    /// All well-ordered subsets of the region.
    W(RegionDescriptor),
    /// All finite subsets of the region.
    Fin(RegionDescriptor),
    /// Finitely many explicit finite sets.
    Explicit(Vec<SupportSet>),
}

impl FamilyDescriptor {
    /// An explicit family from lists of elements; duplicates are removed and
    /// members are kept in a canonical order.
    pub fn explicit(members: impl IntoIterator<Item = SupportSet>) -> Self {
        let mut v: Vec<SupportSet> = members.into_iter().collect();
        v.sort_by(|a, b| a.elements().cmp(b.elements()));
        v.dedup();
        FamilyDescriptor::Explicit(v)
    }

    /// Checks that every listed element belongs to `group`.
    pub fn validate(&self, group: GroupDescriptor) -> Result<(), SupportError> {
        let ok = match self {
            FamilyDescriptor::W(r) | FamilyDescriptor::Fin(r) => r.belongs_to(group),
            FamilyDescriptor::Explicit(members) => {
                members.iter().all(|m| m.is_explicit() && m.elements().iter().all(|g| g.belongs_to(group)))
            }
        };
        if ok {
            Ok(())
        } else {
            Err(SupportError::Group(GroupError::Mismatch {
                expected: group,
                found: self.first_foreign(group).unwrap_or(group),
            }))
        }
    }

    fn first_foreign(&self, group: GroupDescriptor) -> Option<GroupDescriptor> {
        let elements: Vec<&GroupElement> = match self {
            FamilyDescriptor::W(r) | FamilyDescriptor::Fin(r) => r.listed().iter().collect(),
            FamilyDescriptor::Explicit(members) => members.iter().flat_map(|m| m.elements()).collect(),
        };
        elements.into_iter().find(|g| !g.belongs_to(group)).map(GroupElement::descriptor)
    }

    pub fn region(&self) -> Option<&RegionDescriptor> {
        match self {
            FamilyDescriptor::W(r) | FamilyDescriptor::Fin(r) => Some(r),
            FamilyDescriptor::Explicit(_) => None,
        }
    }
}

impl fmt::Display for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyDescriptor::W(r) => write!(f, "W({r})"),
            FamilyDescriptor::Fin(r) => write!(f, "FIN({r})"),
            FamilyDescriptor::Explicit(members) => {
                write!(f, "explicit{{")?;
                for (i, m) in members.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// Outcome of a membership test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Yes,
    No,
    /// The set is only known through an enumeration that never certified it
    /// finite, so it is not a member of a family of finite sets.
    NoBeyondBudget,
    /// A bounded search was inconclusive.
    Unknown,
}

impl Membership {
    pub fn is_member(self) -> bool {
        self == Membership::Yes
    }

    pub fn is_non_member(self) -> bool {
        matches!(self, Membership::No | Membership::NoBeyondBudget)
    }
}

/// Whether `A` belongs to the family. Enumerated sets are judged on their
/// enumerated prefix; `max_len` bounds submonoid searches.
pub fn family_contains(family: &FamilyDescriptor, a: &SupportSet, max_len: usize) -> Membership {
    match family {
        FamilyDescriptor::W(region) | FamilyDescriptor::Fin(region) => {
            let mut unknown = false;
            for g in a.elements() {
                match region.contains(g, max_len) {
                    Some(true) => {}
                    Some(false) => return Membership::No,
                    None => unknown = true,
                }
            }
            if matches!(family, FamilyDescriptor::Fin(_)) && !a.is_explicit() {
                Membership::NoBeyondBudget
            } else if unknown {
                Membership::Unknown
            } else {
                Membership::Yes
            }
        }
        FamilyDescriptor::Explicit(members) => match a {
            SupportSet::ExplicitFinite(_) => {
                if members.iter().any(|m| m.elements() == a.elements()) {
                    Membership::Yes
                } else {
                    Membership::No
                }
            }
            SupportSet::BoundedEnumeration { prefix, exp_bound, .. } => {
                // a member agreeing with the whole prefix cannot be ruled out
                // without knowing the set beyond the bound
                let agrees = members.iter().any(|m| {
                    let below: Vec<_> = m.elements().iter().filter(|g| *g <= exp_bound).collect();
                    below.len() == prefix.len() && below.iter().zip(prefix).all(|(x, y)| *x == y)
                });
                if agrees {
                    Membership::Unknown
                } else {
                    Membership::No
                }
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Horizon;
    use crate::supports::finite_sums_closure;

    fn set(v: &[i64]) -> SupportSet {
        SupportSet::finite(v.iter().map(|&x| GroupElement::from(x)))
    }

    #[test]
    fn membership_examples() {
        let w = FamilyDescriptor::W(RegionDescriptor::NonNegCone);
        assert_eq!(family_contains(&w, &set(&[0, 2, 5]), 12), Membership::Yes);
        assert_eq!(family_contains(&w, &set(&[-1]), 12), Membership::No);
        let fin = FamilyDescriptor::Fin(RegionDescriptor::WholeGroup);
        let naturals =
            finite_sums_closure(&set(&[1]), &Horizon::new(GroupElement::from(5), 10).unwrap()).unwrap();
        assert_eq!(family_contains(&fin, &naturals, 12), Membership::NoBeyondBudget);
    }

    #[test]
    fn explicit_membership() {
        let f = FamilyDescriptor::explicit([set(&[]), set(&[0]), set(&[0, 1])]);
        assert_eq!(family_contains(&f, &set(&[0, 1]), 12), Membership::Yes);
        assert_eq!(family_contains(&f, &set(&[1]), 12), Membership::No);
        assert_eq!(f.to_string(), "explicit{{},{0},{0,1}}");
    }
}
