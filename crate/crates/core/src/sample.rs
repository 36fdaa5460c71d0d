//! Seeded random inputs for the verifiers and the test suites.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::coefficients::{FieldDescriptor, FieldElement};
use crate::exponents::{GroupDescriptor, GroupElement};
use crate::series::{Domain, Series, SeriesError};
use crate::supports::{FamilyDescriptor, SupportSet};

pub use rand::SeedableRng;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A positive rational `n/d` with `1 <= n <= 9`, `1 <= d <= 4`.
pub fn positive_rational(rng: &mut SampleRng) -> FieldElement {
    let (n, d) = (rng.gen_range(1..=9i64), rng.gen_range(1..=4i64));
    FieldDescriptor::Rationals.from_ratio(&BigInt::from(n), &BigInt::from(d)).expect("nonzero denominator")
}

/// A nonzero element of `field`.
pub fn nonzero_coefficient(rng: &mut SampleRng, field: FieldDescriptor) -> FieldElement {
    loop {
        let c = match field {
            FieldDescriptor::Rationals => {
                let (n, d) = (rng.gen_range(-9..=9i64), rng.gen_range(1..=5i64));
                field.from_ratio(&BigInt::from(n), &BigInt::from(d)).expect("nonzero denominator")
            }
            FieldDescriptor::PrimeField(p) => field.from_i64(rng.gen_range(0..p.min(1 << 20) as i64)),
            FieldDescriptor::RationalFunctions(_) => {
                let x = field.variable().expect("rational functions have x");
                let mut c = field.from_i64(rng.gen_range(0..3));
                let mut xp = field.one();
                for _ in 0..rng.gen_range(0..3) {
                    xp = &xp * &x;
                    c = &c + &(&field.from_i64(rng.gen_range(0..3)) * &xp);
                }
                c
            }
        };
        if !c.is_zero() {
            return c;
        }
    }
}

/// Up to `max_points` distinct points from `pool`, at least one.
pub fn subset_of<T: Clone + Ord>(rng: &mut SampleRng, pool: &[T], max_points: usize) -> Vec<T> {
    let k = rng.gen_range(1..=max_points.min(pool.len()));
    let mut v: Vec<T> = pool.choose_multiple(rng, k).cloned().collect();
    v.sort();
    v
}

/// `a` over `Q((Z))` with positive coefficients on at most `max_points`
/// exponents in `{1, .., 6}`.
pub fn positive_series_integers(rng: &mut SampleRng, max_points: usize) -> Series {
    let pool: Vec<GroupElement> = (1..=6).map(GroupElement::from).collect();
    positive_series(rng, GroupDescriptor::Integers, &pool, max_points)
}

/// `a` over `Q((Q))` with positive coefficients on at most `max_points`
/// exponents `n/d` in `(0, 2]` with `d <= 4`.
pub fn positive_series_rationals(rng: &mut SampleRng, max_points: usize) -> Series {
    let mut pool: Vec<GroupElement> =
        (1..=4i64).flat_map(|d| (1..=2 * d).map(move |n| GroupElement::rational(n, d))).collect();
    pool.sort();
    pool.dedup();
    positive_series(rng, GroupDescriptor::Rationals, &pool, max_points)
}

fn positive_series(
    rng: &mut SampleRng,
    group: GroupDescriptor,
    pool: &[GroupElement],
    max_points: usize,
) -> Series {
    let domain = Domain::new(group, FieldDescriptor::Rationals);
    let exps = subset_of(rng, pool, max_points);
    let terms: Vec<_> = exps.into_iter().map(|g| (g, positive_rational(rng))).collect();
    Series::literal(domain, terms).expect("exponents and coefficients match the domain")
}

/// A nonzero finite series over `Z` with up to `max_terms` terms and exponents
/// in `lo..=hi`.
pub fn nonzero_series(
    rng: &mut SampleRng,
    field: FieldDescriptor,
    lo: i64,
    hi: i64,
    max_terms: usize,
) -> Result<Series, SeriesError> {
    let domain = Domain::new(GroupDescriptor::Integers, field);
    let pool: Vec<GroupElement> = (lo..=hi).map(GroupElement::from).collect();
    let exps = subset_of(rng, &pool, max_terms);
    let terms: Vec<_> = exps.into_iter().map(|g| (g, nonzero_coefficient(rng, field))).collect();
    Series::literal(domain, terms)
}

fn powerset(universe: &[GroupElement]) -> Vec<SupportSet> {
    (0u32..1 << universe.len())
        .map(|m| {
            SupportSet::finite((0..universe.len()).filter(|i| m >> i & 1 == 1).map(|i| universe[i].clone()))
        })
        .collect()
}

/// A random explicit family of subsets of `{lo, .., hi}`. The draws mix
/// arbitrary small families with powersets (closed under subsets and unions)
/// and perturbations of them, so both outcomes of the closure checks occur.
pub fn explicit_family(rng: &mut SampleRng, lo: i64, hi: i64) -> FamilyDescriptor {
    let universe: Vec<GroupElement> = (lo..=hi).map(GroupElement::from).collect();
    let random_set = |rng: &mut SampleRng, max: usize| -> SupportSet {
        let k = rng.gen_range(0..=max.min(universe.len()));
        SupportSet::finite(universe.choose_multiple(rng, k).cloned())
    };
    let base = |rng: &mut SampleRng| -> Vec<SupportSet> {
        let u = random_set(rng, 4);
        powerset(u.elements())
    };
    let members: Vec<SupportSet> = match rng.gen_range(0..5) {
        0 => (0..rng.gen_range(0..=6)).map(|_| random_set(rng, 3)).collect(),
        1 => base(rng),
        2 => {
            let mut v = base(rng);
            let i = rng.gen_range(0..v.len());
            v.remove(i);
            v
        }
        3 => {
            let mut v = base(rng);
            v.extend(base(rng));
            v
        }
        _ => {
            let mut v = base(rng);
            v.push(random_set(rng, 3));
            v
        }
    };
    FamilyDescriptor::explicit(members)
}
