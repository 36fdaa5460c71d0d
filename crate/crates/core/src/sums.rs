use std::collections::BTreeSet;

use crate::exponents::GroupElement;

/// All finite sums of `generators` (each strictly positive) that are at most
/// `limit`, in increasing order, starting with the empty sum `0`.
///
/// At most `cap` sums are produced. The flag is `true` when the list is
/// complete up to `limit`, and `false` when the cap cut it short, in which
/// case it is complete up to its last element.
pub(crate) fn enumerate_finite_sums(
    generators: &[GroupElement],
    limit: &GroupElement,
    cap: usize,
) -> (Vec<GroupElement>, bool) {
    let zero = limit.descriptor().zero();
    if &zero > limit {
        return (Vec::new(), true);
    }
    debug_assert!(generators.iter().all(GroupElement::is_positive));
    let mut gens: Vec<GroupElement> = generators.to_vec();
    gens.sort();
    gens.dedup();

    let mut frontier = BTreeSet::from([zero]);
    let mut out = Vec::new();
    while let Some(x) = frontier.pop_first() {
        if out.len() == cap {
            return (out, false);
        }
        for g in &gens {
            let next = &x + g;
            if &next > limit {
                break;
            }
            frontier.insert(next);
        }
        out.push(x);
    }
    (out, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<GroupElement> {
        v.iter().map(|&x| GroupElement::from(x)).collect()
    }

    #[test]
    fn sums_of_two_and_three() {
        let (sums, complete) = enumerate_finite_sums(&ints(&[2, 3]), &GroupElement::from(7), 100);
        assert!(complete);
        assert_eq!(sums, ints(&[0, 2, 3, 4, 5, 6, 7]));
    }

    #[test]
    fn empty_sum_is_zero() {
        let (sums, complete) = enumerate_finite_sums(&[], &GroupElement::from(3), 10);
        assert!(complete);
        assert_eq!(sums, ints(&[0]));
    }

    #[test]
    fn cap_reports_incomplete() {
        let (sums, complete) = enumerate_finite_sums(&ints(&[1]), &GroupElement::from(100), 5);
        assert!(!complete);
        assert_eq!(sums, ints(&[0, 1, 2, 3, 4]));
    }

    #[test]
    fn rational_generators() {
        let gens = [GroupElement::rational(1, 2), GroupElement::rational(2, 3)];
        let (sums, _) = enumerate_finite_sums(&gens, &GroupElement::rational(7, 6), 100);
        let expected = [(0, 1), (1, 2), (2, 3), (1, 1), (7, 6)]
            .iter()
            .map(|&(n, d)| GroupElement::rational(n, d))
            .collect::<Vec<_>>();
        assert_eq!(sums, expected);
    }
}
