use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use super::{finite_sums_closure, translate, FamilyDescriptor, RegionDescriptor, SupportSet};
use crate::exponents::{element_outside_subgroup, GroupDescriptor, GroupElement};
use crate::series::Horizon;

/// The closure conditions on a family of supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    A1,
    A2,
    A3,
    A4,
    A5,
}

impl Condition {
    pub const ALL: [Condition; 11] = [
        Condition::S1,
        Condition::S2,
        Condition::S3,
        Condition::S4,
        Condition::S5,
        Condition::S6,
        Condition::A1,
        Condition::A2,
        Condition::A3,
        Condition::A4,
        Condition::A5,
    ];

    /// One-line statement of the condition.
    pub fn statement(self) -> &'static str {
        match self {
            Condition::S1 => "every singleton is a member",
            Condition::S2 => "subsets of members are members",
            Condition::S3 => "unions of two members are members",
            Condition::S4 => "{0} is a member",
            Condition::S5 => "the family is nonempty",
            Condition::S6 => "initial segments of members are members",
            Condition::A1 => "the members together generate the group",
            Condition::A2 => "sums A + B of members are members",
            Condition::A3 => "translates of members are members",
            Condition::A4 => "finite sums of a nonnegative member form a member",
            Condition::A5 => "{g} a member implies {-g} a member",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Condition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Condition::ALL
            .iter()
            .copied()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown condition `{s}` (expected S1..S6 or A1..A5)"))
    }
}

/// Concrete evidence that a condition fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `required` is obtained from `members` by the condition's operation (a
    /// translation by `shift` for A3) but does not belong to the family.
    Missing {
        required: SupportSet,
        members: Vec<SupportSet>,
        shift: Option<GroupElement>,
    },
    /// An element outside the subgroup generated by all members.
    Ungenerated(GroupElement),
    EmptyFamily,
}

impl Witness {
    fn missing(required: SupportSet, members: Vec<SupportSet>) -> Self {
        Witness::Missing { required, members, shift: None }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Witness::Missing { required, members, shift } => {
                let mut v = json!({
                    "missing": required.to_string(),
                    "from": members.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                });
                if let Some(g) = shift {
                    v["shift"] = Value::String(g.to_string());
                }
                v
            }
            Witness::Ungenerated(g) => json!({"ungenerated": g.to_string()}),
            Witness::EmptyFamily => json!({"empty_family": true}),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Missing { required, members, shift } => {
                write!(f, "{required} is not a member")?;
                if !members.is_empty() {
                    let list: Vec<String> = members.iter().map(|m| m.to_string()).collect();
                    write!(f, " (built from {}", list.join(", "))?;
                    if let Some(g) = shift {
                        write!(f, " shifted by {g}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
            Witness::Ungenerated(g) => write!(f, "{g} is not generated by the members"),
            Witness::EmptyFamily => write!(f, "the family is empty"),
        }
    }
}

/// Outcome of a condition check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The condition holds by the named rule.
    Holds(String),
    Fails(Witness),
    /// Neither a rule nor a witness was found within the budget.
    Unknown(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds(_))
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails(w) => Some(w),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Holds(rule) => json!({"outcome": "holds", "rule": rule}),
            Verdict::Fails(w) => json!({"outcome": "fails", "witness": w.to_json()}),
            Verdict::Unknown(reason) => json!({"outcome": "unknown", "reason": reason}),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds(rule) => write!(f, "holds ({rule})"),
            Verdict::Fails(w) => write!(f, "fails: {w}"),
            Verdict::Unknown(reason) => write!(f, "unknown ({reason})"),
        }
    }
}

/// Limits for the bounded parts of condition checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckBudget {
    /// Horizon for enumerating infinite witness sets.
    pub horizon: Horizon,
    /// Members with more elements are not expanded into all their subsets.
    pub subset_limit: usize,
    /// Longest generator sum tried in submonoid searches.
    pub monoid_search_length: usize,
}

impl CheckBudget {
    pub fn new(horizon: Horizon) -> Self {
        CheckBudget { horizon, subset_limit: 20, monoid_search_length: 12 }
    }
}

fn holds(rule: &str) -> Verdict {
    Verdict::Holds(rule.to_string())
}

fn undecided_search(budget: &CheckBudget) -> Verdict {
    Verdict::Unknown(format!(
        "submonoid search up to {} summands was inconclusive",
        budget.monoid_search_length
    ))
}

/// Checks one condition on a family over `group`.
pub fn check_condition(
    group: GroupDescriptor,
    family: &FamilyDescriptor,
    condition: Condition,
    budget: &CheckBudget,
) -> Verdict {
    match family {
        FamilyDescriptor::W(region) => check_region(group, region, false, condition, budget),
        FamilyDescriptor::Fin(region) => check_region(group, region, true, condition, budget),
        FamilyDescriptor::Explicit(members) => check_explicit(group, members, condition, budget),
    }
}

/// All eleven conditions, in order.
pub fn check_all_conditions(
    group: GroupDescriptor,
    family: &FamilyDescriptor,
    budget: &CheckBudget,
) -> Vec<(Condition, Verdict)> {
    Condition::ALL.iter().map(|&c| (c, check_condition(group, family, c, budget))).collect()
}

/// Some element of a nonempty region.
fn region_element(group: GroupDescriptor, region: &RegionDescriptor) -> Option<GroupElement> {
    if region.contains_zero() {
        return Some(group.zero());
    }
    region.positive_element(group).or_else(|| region.listed().first().cloned())
}

/// `⊕ A` enumerated far enough to exhibit `at_least` elements.
fn enumerated_sums(a: &[GroupElement], at_least: usize, budget: &CheckBudget) -> Option<SupportSet> {
    let top = a.iter().filter(|g| g.is_positive()).max()?;
    let bound = top.scale(&(at_least as i64).into());
    let bound = if bound > budget.horizon.exp_bound { bound } else { budget.horizon.exp_bound.clone() };
    let h = Horizon::new(bound, budget.horizon.term_bound.max(at_least + 1)).ok()?;
    finite_sums_closure(&SupportSet::finite(a.iter().cloned()), &h).ok()
}

fn check_region(
    group: GroupDescriptor,
    region: &RegionDescriptor,
    finite: bool,
    condition: Condition,
    budget: &CheckBudget,
) -> Verdict {
    let len = budget.monoid_search_length;
    let kind = if finite { "finite" } else { "well-ordered" };
    match condition {
        Condition::S1 => match region.outside_element(group, len) {
            Some(None) => holds("the region is the whole group, so every singleton lies in it"),
            Some(Some(x)) => Verdict::Fails(Witness::missing(SupportSet::singleton(x), vec![])),
            None => undecided_search(budget),
        },
        Condition::S2 => Verdict::Holds(format!("a subset of a {kind} subset of the region is again one")),
        Condition::S3 => Verdict::Holds(format!("a union of two {kind} subsets of the region is again one")),
        Condition::S4 => {
            if region.contains_zero() {
                holds("0 lies in the region")
            } else {
                Verdict::Fails(Witness::missing(SupportSet::singleton(group.zero()), vec![]))
            }
        }
        Condition::S5 => holds("the empty set is a member"),
        Condition::S6 => {
            Verdict::Holds(format!("an initial segment of a {kind} subset of the region is again one"))
        }
        Condition::A1 => match region.span_outside(group) {
            None => holds("the region generates the group"),
            Some(x) => Verdict::Fails(Witness::Ungenerated(x)),
        },
        Condition::A2 => match region.addition_failure() {
            None => holds("the region is closed under addition"),
            Some((a, b)) => Verdict::Fails(Witness::missing(
                SupportSet::singleton(&a + &b),
                vec![SupportSet::singleton(a), SupportSet::singleton(b)],
            )),
        },
        Condition::A3 => {
            if region.is_empty(group) {
                return holds("the region is empty, so the only member is the empty set");
            }
            match region.outside_element(group, len) {
                Some(None) => holds("the region is the whole group"),
                Some(Some(x)) => {
                    let s = region_element(group, region).expect("nonempty region");
                    Verdict::Fails(Witness::Missing {
                        required: SupportSet::singleton(x.clone()),
                        shift: Some(&x - &s),
                        members: vec![SupportSet::singleton(s)],
                    })
                }
                None => undecided_search(budget),
            }
        }
        Condition::A4 => {
            if !region.contains_zero() {
                // the empty sum: finite sums of the empty member give {0}
                return Verdict::Fails(Witness::missing(
                    SupportSet::singleton(group.zero()),
                    vec![SupportSet::empty()],
                ));
            }
            let offending = if finite {
                region.positive_element(group).map(|p| vec![p])
            } else {
                region.nonneg_sum_failure()
            };
            match offending {
                None if finite => holds("the region has no positive element, so finite sums stay in {0}"),
                None => holds("0 lies in the region and its nonnegative part is closed under addition"),
                Some(a) => match enumerated_sums(&a, 2, budget) {
                    Some(sums) => Verdict::Fails(Witness::missing(sums, vec![SupportSet::finite(a)])),
                    None => Verdict::Unknown("the finite sums could not be enumerated".into()),
                },
            }
        }
        Condition::A5 => match region.symmetry_failure(group, len) {
            Some(None) => holds("the region is symmetric under negation"),
            Some(Some(g)) => Verdict::Fails(Witness::missing(
                SupportSet::singleton(g.negated()),
                vec![SupportSet::singleton(g)],
            )),
            None => undecided_search(budget),
        },
    }
}

/// Every subset of `elements`, smallest bitmask first.
fn subsets(elements: &[GroupElement]) -> impl Iterator<Item = Vec<GroupElement>> + '_ {
    (0u64..1 << elements.len()).map(move |mask| {
        elements.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, g)| g.clone()).collect()
    })
}

fn check_explicit(
    group: GroupDescriptor,
    members: &[SupportSet],
    condition: Condition,
    budget: &CheckBudget,
) -> Verdict {
    let index: HashSet<&[GroupElement]> = members.iter().map(|m| m.elements()).collect();
    let is_member = |v: &[GroupElement]| index.contains(v);
    let finite = |v: Vec<GroupElement>| SupportSet::finite(v);
    let pairs = || members.iter().flat_map(|a| members.iter().map(move |b| (a, b)));
    match condition {
        Condition::S1 => {
            let Some(unit) = group.unit() else {
                let zero = [group.zero()];
                return if is_member(&zero) {
                    holds("the trivial group has the single singleton {0}, which is a member")
                } else {
                    Verdict::Fails(Witness::missing(finite(zero.to_vec()), vec![]))
                };
            };
            let g = (0i64..)
                .flat_map(|k| [k, -k - 1])
                .map(|k| unit.scale(&k.into()))
                .find(|g| !is_member(std::slice::from_ref(g)))
                .expect("a finite family misses some singleton");
            Verdict::Fails(Witness::missing(SupportSet::singleton(g), vec![]))
        }
        Condition::S2 => {
            let mut too_large = false;
            for a in members {
                if a.elements().len() > budget.subset_limit {
                    too_large = true;
                    continue;
                }
                if let Some(b) = subsets(a.elements()).find(|b| !is_member(b)) {
                    return Verdict::Fails(Witness::missing(finite(b), vec![a.clone()]));
                }
            }
            if too_large {
                Verdict::Unknown(format!("a member has more than {} elements", budget.subset_limit))
            } else {
                holds("every subset of every member was found in the family")
            }
        }
        Condition::S3 => {
            for (a, b) in pairs() {
                let u: Vec<GroupElement> = a.elements().iter().chain(b.elements()).cloned().collect();
                let u = finite(u);
                if !is_member(u.elements()) {
                    return Verdict::Fails(Witness::missing(u, vec![a.clone(), b.clone()]));
                }
            }
            holds("every pairwise union was found in the family")
        }
        Condition::S4 => {
            let zero = [group.zero()];
            if is_member(&zero) {
                holds("{0} is a member")
            } else {
                Verdict::Fails(Witness::missing(finite(zero.to_vec()), vec![]))
            }
        }
        Condition::S5 => {
            if members.is_empty() {
                Verdict::Fails(Witness::EmptyFamily)
            } else {
                holds("the family has a member")
            }
        }
        Condition::S6 => {
            for a in members {
                let e = a.elements();
                if let Some(k) = (0..e.len()).find(|&k| !is_member(&e[..k])) {
                    return Verdict::Fails(Witness::missing(finite(e[..k].to_vec()), vec![a.clone()]));
                }
            }
            holds("every initial segment of every member was found in the family")
        }
        Condition::A1 => {
            let all: Vec<GroupElement> = members.iter().flat_map(|m| m.elements()).cloned().collect();
            match element_outside_subgroup(group, &all) {
                None => holds("the union of the members generates the group"),
                Some(x) => Verdict::Fails(Witness::Ungenerated(x)),
            }
        }
        Condition::A2 => {
            for (a, b) in pairs() {
                let s: Vec<GroupElement> =
                    a.elements().iter().flat_map(|x| b.elements().iter().map(move |y| x + y)).collect();
                let s = finite(s);
                if !is_member(s.elements()) {
                    return Verdict::Fails(Witness::missing(s, vec![a.clone(), b.clone()]));
                }
            }
            holds("every pairwise sum set was found in the family")
        }
        Condition::A3 => {
            let Some(unit) = group.unit() else {
                return holds("the trivial group only translates by 0");
            };
            let Some(a) = members.iter().find(|m| !m.elements().is_empty()) else {
                return holds("every member is empty and the empty set is translation invariant");
            };
            let (shifted, g) = (1i64..)
                .map(|k| unit.scale(&k.into()))
                .map(|g| (translate(a, &g), g))
                .find(|(s, _)| !is_member(s.elements()))
                .expect("a finite family misses some translate");
            Verdict::Fails(Witness::Missing { required: shifted, members: vec![a.clone()], shift: Some(g) })
        }
        Condition::A4 => {
            let largest = members.iter().map(|m| m.elements().len()).max().unwrap_or(0);
            let zero = [group.zero()];
            for a in members.iter().filter(|m| m.elements().iter().all(|g| !g.is_negative())) {
                if a.elements().iter().any(GroupElement::is_positive) {
                    // finite sums of a positive element never stop growing
                    return match enumerated_sums(a.elements(), largest + 1, budget) {
                        Some(sums) => Verdict::Fails(Witness::missing(sums, vec![a.clone()])),
                        None => Verdict::Unknown("the finite sums could not be enumerated".into()),
                    };
                }
                if !is_member(&zero) {
                    return Verdict::Fails(Witness::missing(finite(zero.to_vec()), vec![a.clone()]));
                }
            }
            holds("every nonnegative member only sums to {0}, which is a member")
        }
        Condition::A5 => {
            for a in members.iter().filter(|m| m.elements().len() == 1) {
                let neg = [a.elements()[0].negated()];
                if !is_member(&neg) {
                    return Verdict::Fails(Witness::missing(finite(neg.to_vec()), vec![a.clone()]));
                }
            }
            holds("every singleton member has its negative as a member")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> CheckBudget {
        CheckBudget::new(Horizon::new(GroupElement::from(10), 1000).unwrap())
    }

    fn set(v: &[i64]) -> SupportSet {
        SupportSet::finite(v.iter().map(|&x| GroupElement::from(x)))
    }

    const Z: GroupDescriptor = GroupDescriptor::Integers;

    #[test]
    fn nonnegative_cone_misses_negative_singletons() {
        let f = FamilyDescriptor::W(RegionDescriptor::NonNegCone);
        let v = check_condition(Z, &f, Condition::S1, &budget());
        assert_eq!(v, Verdict::Fails(Witness::missing(set(&[-1]), vec![])));
    }

    #[test]
    fn finite_sets_fail_the_sums_condition() {
        let f = FamilyDescriptor::Fin(RegionDescriptor::WholeGroup);
        let v = check_condition(Z, &f, Condition::A4, &budget());
        let Verdict::Fails(Witness::Missing { members, .. }) = v else {
            panic!("expected a failure, got {v:?}")
        };
        assert_eq!(members, vec![set(&[1])]);
    }

    #[test]
    fn whole_group_satisfies_everything() {
        let f = FamilyDescriptor::W(RegionDescriptor::WholeGroup);
        for (c, v) in check_all_conditions(Z, &f, &budget()) {
            assert!(v.holds(), "{c}: {v}");
        }
    }

    #[test]
    fn explicit_family_checks() {
        let f = FamilyDescriptor::explicit([set(&[]), set(&[0]), set(&[1])]);
        assert!(check_condition(Z, &f, Condition::S3, &budget()).fails());
        assert!(check_condition(Z, &f, Condition::S2, &budget()).holds());
        let v = check_condition(Z, &f, Condition::A2, &budget());
        assert_eq!(v, Verdict::Fails(Witness::missing(set(&[2]), vec![set(&[1]), set(&[1])])));
        let g = FamilyDescriptor::explicit([set(&[]), set(&[0])]);
        assert!(check_condition(Z, &g, Condition::S1, &budget()).fails());
        assert!(check_condition(Z, &g, Condition::A1, &budget()).fails());
    }

    #[test]
    fn trivial_group_family() {
        let t = GroupDescriptor::Trivial;
        let f = FamilyDescriptor::W(RegionDescriptor::WholeGroup);
        for (c, v) in check_all_conditions(t, &f, &budget()) {
            assert!(v.holds(), "{c}: {v}");
        }
        let empty_only = FamilyDescriptor::W(RegionDescriptor::PosCone);
        assert!(check_condition(t, &empty_only, Condition::S4, &budget()).fails());
        assert!(check_condition(t, &empty_only, Condition::A1, &budget()).holds());
    }

    #[test]
    fn condition_names_parse() {
        assert_eq!("a4".parse::<Condition>().unwrap(), Condition::A4);
        assert!("B1".parse::<Condition>().is_err());
    }
}
