//! Brute-force set operations on integer exponents.

use std::collections::BTreeSet;

pub fn minkowski(a: &[i64], b: &[i64]) -> Vec<i64> {
    let s: BTreeSet<i64> = a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect();
    s.into_iter().collect()
}

/// All sums of finitely many elements of `a` (the empty sum is `0`) that are
/// `<= bound`. Elements must be positive.
pub fn finite_sums(a: &[i64], bound: i64) -> Vec<i64> {
    assert!(a.iter().all(|&x| x > 0), "finite_sums needs positive elements");
    let mut reach = vec![false; (bound.max(0) + 1) as usize];
    if bound >= 0 {
        reach[0] = true;
    }
    for s in 1..=bound.max(0) {
        reach[s as usize] = a.iter().any(|&x| x <= s && reach[(s - x) as usize]);
    }
    (0..=bound.max(0)).filter(|&s| reach[s as usize]).collect()
}

/// Every subset of `a`, as sorted vectors.
pub fn subsets(a: &[i64]) -> Vec<Vec<i64>> {
    (0u64..1 << a.len()).map(|m| (0..a.len()).filter(|i| m >> i & 1 == 1).map(|i| a[i]).collect()).collect()
}

/// Whether the explicit family is closed under subsets.
pub fn closed_under_subsets(family: &[Vec<i64>]) -> bool {
    family.iter().all(|m| subsets(m).iter().all(|s| family.contains(s)))
}

/// Whether the explicit family is closed under pairwise unions.
pub fn closed_under_unions(family: &[Vec<i64>]) -> bool {
    family.iter().all(|a| {
        family.iter().all(|b| {
            let u: BTreeSet<i64> = a.iter().chain(b).copied().collect();
            family.contains(&u.into_iter().collect())
        })
    })
}

/// Whether the explicit family is closed under `A ⊕ B`.
pub fn closed_under_sums(family: &[Vec<i64>]) -> bool {
    family.iter().all(|a| family.iter().all(|b| family.contains(&minkowski(a, b))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(minkowski(&[2, 3], &[0, 1]), vec![2, 3, 4]);
        assert_eq!(finite_sums(&[2, 3], 7), vec![0, 2, 3, 4, 5, 6, 7]);
        assert_eq!(finite_sums(&[], 3), vec![0]);
        assert_eq!(subsets(&[1, 2]).len(), 4);
        let fam = vec![vec![], vec![0], vec![1]];
        assert!(closed_under_subsets(&fam));
        assert!(!closed_under_unions(&fam));
    }
}
