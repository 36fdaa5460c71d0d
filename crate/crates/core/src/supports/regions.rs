use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exponents::{element_outside_subgroup, subgroup_contains, GroupDescriptor, GroupElement};

/// Largest integer range the exact submonoid test scans.
const MONOID_SCAN_LIMIT: u64 = 1 << 20;

/// A subset `S` of the exponent group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegionDescriptor {
    WholeGroup,
    /// `G^{>=0}`.
    NonNegCone,
    /// `G^{>0}`.
    PosCone,
    /// The submonoid generated by finitely many elements (always contains 0).
    SubmonoidGen(Vec<GroupElement>),
    /// The subgroup generated by finitely many elements.
    SubgroupGen(Vec<GroupElement>),
    FiniteSet(Vec<GroupElement>),
}

impl fmt::Display for RegionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[GroupElement]| v.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(",");
        match self {
            RegionDescriptor::WholeGroup => write!(f, "G"),
            RegionDescriptor::NonNegCone => write!(f, "G>=0"),
            RegionDescriptor::PosCone => write!(f, "G>0"),
            RegionDescriptor::SubmonoidGen(g) => write!(f, "mon{{{}}}", list(g)),
            RegionDescriptor::SubgroupGen(g) => write!(f, "grp{{{}}}", list(g)),
            RegionDescriptor::FiniteSet(g) => write!(f, "{{{}}}", list(g)),
        }
    }
}

/// Signs present among the nonzero generators.
fn signs(gens: &[GroupElement]) -> (bool, bool) {
    (gens.iter().any(GroupElement::is_positive), gens.iter().any(GroupElement::is_negative))
}

/// Integer images of rational (or integer) elements on a common lattice
/// `(1/L) Z`.
fn to_integers(values: &[&GroupElement]) -> Option<Vec<BigInt>> {
    let mut lcm = BigInt::one();
    for v in values {
        match v {
            GroupElement::Int(_) => {}
            GroupElement::Rat(r) => lcm = lcm.lcm(r.denom()),
            _ => return None,
        }
    }
    values
        .iter()
        .map(|v| match v {
            GroupElement::Int(n) => Some(n * &lcm),
            GroupElement::Rat(r) => Some((r * BigRational::from_integer(lcm.clone())).to_integer()),
            _ => None,
        })
        .collect()
}

/// Exact membership of `target >= 0` in the monoid generated by positive
/// integers, or `None` when the range is too large to scan.
fn numerical_monoid_contains(gens: &[BigInt], target: &BigInt) -> Option<bool> {
    if target.is_zero() {
        return Some(true);
    }
    if target.is_negative() || gens.is_empty() {
        return Some(false);
    }
    let d = gens.iter().fold(BigInt::zero(), |acc, g| acc.gcd(g));
    if !target.is_multiple_of(&d) {
        return Some(false);
    }
    let gens: Vec<BigInt> = gens.iter().map(|g| g / &d).collect();
    let target = target / &d;
    let max = gens.iter().max().expect("nonempty").clone();
    // coprime generators reach everything beyond max * max
    if target > &max * &max {
        return Some(true);
    }
    let n = target.to_u64().filter(|&n| n <= MONOID_SCAN_LIMIT)? as usize;
    let small: Vec<usize> = gens.iter().filter_map(|g| g.to_usize()).filter(|&g| g <= n).collect();
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for x in 1..=n {
        reach[x] = small.iter().any(|&g| g <= x && reach[x - g]);
    }
    Some(reach[n])
}

/// Breadth-first search over sums of at most `max_len` generators.
fn bounded_sum_search(gens: &[GroupElement], target: &GroupElement, max_len: usize) -> bool {
    let zero = target.descriptor().zero();
    if target == &zero {
        return true;
    }
    let mut seen: HashSet<GroupElement> = HashSet::from([zero.clone()]);
    let mut layer = vec![zero];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for x in &layer {
            for g in gens {
                let y = x + g;
                if &y == target {
                    return true;
                }
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        layer = next;
    }
    false
}

/// Membership of `g` in the submonoid generated by `gens`. `None` means the
/// bounded search (sums of at most `max_len` generators) found no
/// representation and no obstruction was found either.
pub fn submonoid_contains(gens: &[GroupElement], g: &GroupElement, max_len: usize) -> Option<bool> {
    if !subgroup_contains(gens, g) {
        return Some(false);
    }
    let (pos, neg) = signs(gens);
    if !pos && !neg {
        return Some(g.is_zero());
    }
    if pos && !neg && g.is_negative() || neg && !pos && g.is_positive() {
        return Some(false);
    }
    match g {
        GroupElement::Int(_) | GroupElement::Rat(_) => {
            if pos && neg {
                // a submonoid of a rank-one group with both signs is a group
                return Some(true);
            }
            let mut all: Vec<&GroupElement> = gens.iter().filter(|x| !x.is_zero()).collect();
            all.push(g);
            let ints = to_integers(&all)?;
            let (target, gens) = ints.split_last().expect("target present");
            let flip = |x: &BigInt| if neg { -x } else { x.clone() };
            let gens: Vec<BigInt> = gens.iter().map(flip).collect();
            numerical_monoid_contains(&gens, &flip(target))
        }
        _ => bounded_sum_search(gens, g, max_len).then_some(true),
    }
}

impl RegionDescriptor {
    /// The listed generators or elements.
    pub fn listed(&self) -> &[GroupElement] {
        match self {
            RegionDescriptor::SubmonoidGen(v)
            | RegionDescriptor::SubgroupGen(v)
            | RegionDescriptor::FiniteSet(v) => v,
            _ => &[],
        }
    }

    /// Whether all listed generators or elements belong to `group`.
    pub fn belongs_to(&self, group: GroupDescriptor) -> bool {
        self.listed().iter().all(|g| g.belongs_to(group))
    }

    /// `g in S`; `None` when a bounded submonoid search is inconclusive.
    pub fn contains(&self, g: &GroupElement, max_len: usize) -> Option<bool> {
        match self {
            RegionDescriptor::WholeGroup => Some(true),
            RegionDescriptor::NonNegCone => Some(!g.is_negative()),
            RegionDescriptor::PosCone => Some(g.is_positive()),
            RegionDescriptor::SubgroupGen(gens) => Some(subgroup_contains(gens, g)),
            RegionDescriptor::SubmonoidGen(gens) => submonoid_contains(gens, g, max_len),
            RegionDescriptor::FiniteSet(v) => Some(v.contains(g)),
        }
    }

    pub fn contains_zero(&self) -> bool {
        match self {
            RegionDescriptor::PosCone => false,
            RegionDescriptor::FiniteSet(v) => v.iter().any(GroupElement::is_zero),
            _ => true,
        }
    }

    /// Whether `S` is empty.
    pub fn is_empty(&self, group: GroupDescriptor) -> bool {
        match self {
            RegionDescriptor::PosCone => group.is_trivial(),
            RegionDescriptor::FiniteSet(v) => v.is_empty(),
            _ => false,
        }
    }

    /// An element of `G` outside `S`: `Some(None)` when `S = G`, `None` when
    /// this cannot be decided within the search length.
    pub fn outside_element(&self, group: GroupDescriptor, max_len: usize) -> Option<Option<GroupElement>> {
        let zero = group.zero();
        let Some(unit) = group.unit() else {
            // the trivial group: S is either {0} or empty
            return Some((!self.contains_zero()).then_some(zero));
        };
        match self {
            RegionDescriptor::WholeGroup => Some(None),
            RegionDescriptor::NonNegCone => Some(Some(unit.negated())),
            RegionDescriptor::PosCone => Some(Some(zero)),
            RegionDescriptor::SubgroupGen(gens) => Some(element_outside_subgroup(group, gens)),
            RegionDescriptor::SubmonoidGen(gens) => {
                if let Some(x) = element_outside_subgroup(group, gens) {
                    return Some(Some(x));
                }
                let (pos, neg) = signs(gens);
                if !neg {
                    return Some(Some(unit.negated()));
                }
                if !pos {
                    return Some(Some(unit));
                }
                if matches!(group, GroupDescriptor::Integers | GroupDescriptor::Rationals) {
                    return Some(None);
                }
                // mixed signs in Z^n: the monoid is G once it holds +-basis
                let basis = group.basis().unwrap_or_default();
                let mut all_found = true;
                for b in basis.iter().flat_map(|b| [b.clone(), b.negated()]) {
                    match submonoid_contains(gens, &b, max_len) {
                        Some(true) => {}
                        Some(false) => return Some(Some(b)),
                        None => all_found = false,
                    }
                }
                all_found.then_some(None)
            }
            RegionDescriptor::FiniteSet(v) => Some(
                (0..)
                    .flat_map(|k: i64| [k, -k - 1])
                    .map(|k| group.multiple_of_unit(k))
                    .find(|g| !v.contains(g)),
            ),
        }
    }

    /// An element outside the subgroup generated by `S`, or `None` when `S`
    /// generates `G`.
    pub fn span_outside(&self, group: GroupDescriptor) -> Option<GroupElement> {
        match self {
            // the nonnegative cone generates G; the positive cone does too
            // except in the trivial group, where the empty set generates {0} = G
            RegionDescriptor::WholeGroup | RegionDescriptor::NonNegCone | RegionDescriptor::PosCone => None,
            RegionDescriptor::SubmonoidGen(v)
            | RegionDescriptor::SubgroupGen(v)
            | RegionDescriptor::FiniteSet(v) => element_outside_subgroup(group, v),
        }
    }

    /// A pair `a, b in S` with `a + b` outside `S`, or `None` when `S` is
    /// closed under addition.
    pub fn addition_failure(&self) -> Option<(GroupElement, GroupElement)> {
        let RegionDescriptor::FiniteSet(v) = self else {
            return None;
        };
        v.iter()
            .flat_map(|a| v.iter().map(move |b| (a, b)))
            .find(|(a, b)| !v.contains(&(*a + *b)))
            .map(|(a, b)| (a.clone(), b.clone()))
    }

    /// A finite set `A` of nonnegative elements of `S` whose finite sums leave
    /// `S`, or `None` when the nonnegative part of `S` is closed under
    /// addition.
    pub fn nonneg_sum_failure(&self) -> Option<Vec<GroupElement>> {
        let RegionDescriptor::FiniteSet(v) = self else {
            return None;
        };
        // the largest positive element m has 2m outside a finite set
        v.iter().filter(|g| g.is_positive()).max().map(|m| vec![m.clone()])
    }

    /// Some strictly positive element of `S`.
    pub fn positive_element(&self, group: GroupDescriptor) -> Option<GroupElement> {
        match self {
            RegionDescriptor::WholeGroup | RegionDescriptor::NonNegCone | RegionDescriptor::PosCone => {
                group.unit()
            }
            RegionDescriptor::SubgroupGen(v) => v.iter().find(|g| !g.is_zero()).map(GroupElement::abs),
            RegionDescriptor::SubmonoidGen(v) | RegionDescriptor::FiniteSet(v) => {
                v.iter().find(|g| g.is_positive()).cloned()
            }
        }
    }

    /// An element `g in S` with `-g` outside `S`: `Some(None)` when `S` is
    /// symmetric, `None` when undecided.
    pub fn symmetry_failure(&self, group: GroupDescriptor, max_len: usize) -> Option<Option<GroupElement>> {
        match self {
            RegionDescriptor::WholeGroup | RegionDescriptor::SubgroupGen(_) => Some(None),
            RegionDescriptor::NonNegCone | RegionDescriptor::PosCone => Some(group.unit()),
            RegionDescriptor::FiniteSet(v) => Some(v.iter().find(|g| !v.contains(&g.negated())).cloned()),
            RegionDescriptor::SubmonoidGen(gens) => {
                let (pos, neg) = signs(gens);
                match (pos, neg) {
                    (false, false) => Some(None),
                    (true, false) => Some(gens.iter().find(|g| g.is_positive()).cloned()),
                    (false, true) => Some(gens.iter().find(|g| g.is_negative()).cloned()),
                    (true, true) => {
                        let mut all_found = true;
                        for g in gens {
                            match submonoid_contains(gens, &g.negated(), max_len) {
                                Some(true) => {}
                                Some(false) => return Some(Some(g.clone())),
                                None => all_found = false,
                            }
                        }
                        all_found.then_some(None)
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<GroupElement> {
        v.iter().map(|&x| GroupElement::from(x)).collect()
    }

    #[test]
    fn numerical_monoid() {
        let gens = ints(&[2, 3]);
        assert_eq!(submonoid_contains(&gens, &GroupElement::from(1), 12), Some(false));
        assert_eq!(submonoid_contains(&gens, &GroupElement::from(7), 12), Some(true));
        assert_eq!(submonoid_contains(&gens, &GroupElement::from(-2), 12), Some(false));
        let gens = ints(&[5, 7]);
        // 23 is the Frobenius number of <5, 7>
        assert_eq!(submonoid_contains(&gens, &GroupElement::from(23), 12), Some(false));
        assert_eq!(submonoid_contains(&gens, &GroupElement::from(24), 12), Some(true));
        assert_eq!(submonoid_contains(&ints(&[3, -5]), &GroupElement::from(-1), 12), Some(true));
    }

    #[test]
    fn rational_monoid() {
        let gens = [GroupElement::rational(1, 2), GroupElement::rational(2, 3)];
        assert_eq!(submonoid_contains(&gens, &GroupElement::rational(7, 6), 12), Some(true));
        assert_eq!(submonoid_contains(&gens, &GroupElement::rational(1, 6), 12), Some(false));
    }

    #[test]
    fn lex_monoid_is_bounded() {
        let gens = [GroupElement::tuple(&[1, 0]), GroupElement::tuple(&[0, 1])];
        assert_eq!(submonoid_contains(&gens, &GroupElement::tuple(&[2, 3]), 12), Some(true));
        assert_eq!(submonoid_contains(&gens, &GroupElement::tuple(&[-1, 3]), 12), Some(false));
        assert_eq!(submonoid_contains(&gens, &GroupElement::tuple(&[20, 3]), 12), None);
    }

    #[test]
    fn region_facts() {
        let z = GroupDescriptor::Integers;
        assert_eq!(RegionDescriptor::NonNegCone.outside_element(z, 12), Some(Some(GroupElement::from(-1))));
        assert_eq!(RegionDescriptor::WholeGroup.outside_element(z, 12), Some(None));
        let mon = RegionDescriptor::SubmonoidGen(ints(&[2, -3]));
        assert_eq!(mon.outside_element(z, 12), Some(None));
        let grp = RegionDescriptor::SubgroupGen(ints(&[4, 6]));
        assert_eq!(grp.span_outside(z), Some(GroupElement::from(1)));
        let fin = RegionDescriptor::FiniteSet(ints(&[0, 1]));
        assert_eq!(fin.addition_failure(), Some((GroupElement::from(1), GroupElement::from(1))));
        assert_eq!(fin.outside_element(z, 12), Some(Some(GroupElement::from(-1))));
        assert_eq!(
            RegionDescriptor::PosCone.outside_element(GroupDescriptor::Trivial, 12),
            Some(Some(GroupElement::Trivial))
        );
    }
}
