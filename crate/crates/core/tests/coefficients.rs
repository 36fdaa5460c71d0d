use hahn_core::coefficients::{FieldDescriptor, FieldElement, FpPoly, RatFn};
use num_bigint::BigInt;
use proptest::prelude::*;

fn q() -> FieldDescriptor {
    FieldDescriptor::Rationals
}

fn fp(p: u64) -> FieldDescriptor {
    FieldDescriptor::prime_field(p).unwrap()
}

fn fpx(p: u64) -> FieldDescriptor {
    FieldDescriptor::rational_functions(p).unwrap()
}

fn poly(p: u64) -> impl Strategy<Value = FpPoly> {
    proptest::collection::vec(0..p, 0..4).prop_map(move |c| FpPoly::new(c, p))
}

fn element(field: FieldDescriptor) -> BoxedStrategy<FieldElement> {
    match field {
        FieldDescriptor::Rationals => (-50i64..50, 1i64..20)
            .prop_map(|(n, d)| q().from_ratio(&BigInt::from(n), &BigInt::from(d)).unwrap())
            .boxed(),
        FieldDescriptor::PrimeField(p) => (0..p as i64).prop_map(move |v| fp(p).from_i64(v)).boxed(),
        FieldDescriptor::RationalFunctions(p) => (poly(p), poly(p).prop_filter("nonzero", |d| !d.is_zero()))
            .prop_map(|(n, d)| FieldElement::RatFn(RatFn::new(n, d).unwrap()))
            .boxed(),
    }
}

fn descriptors() -> impl Strategy<Value = FieldDescriptor> {
    prop_oneof![Just(q()), Just(fp(2)), Just(fp(5)), Just(fp(101)), Just(fpx(2)), Just(fpx(3))]
}

fn triple() -> impl Strategy<Value = (FieldDescriptor, FieldElement, FieldElement, FieldElement)> {
    descriptors().prop_flat_map(|f| (Just(f), element(f), element(f), element(f)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms((field, a, b, c) in triple()) {
        let add = |x: &FieldElement, y: &FieldElement| x.checked_add(y).unwrap();
        let mul = |x: &FieldElement, y: &FieldElement| x.checked_mul(y).unwrap();
        let (zero, one) = (field.zero(), field.one());
        prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
        prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        prop_assert_eq!(add(&a, &b), add(&b, &a));
        prop_assert_eq!(mul(&a, &b), mul(&b, &a));
        prop_assert_eq!(mul(&a, &add(&b, &c)), add(&mul(&a, &b), &mul(&a, &c)));
        prop_assert_eq!(add(&a, &zero), a.clone());
        prop_assert_eq!(mul(&a, &one), a.clone());
        prop_assert!(add(&a, &a.negated()).is_zero());
        if a.is_zero() {
            prop_assert!(a.inv().is_err());
        } else {
            prop_assert_eq!(mul(&a, &a.inv().unwrap()), one);
        }
    }

    #[test]
    fn rational_functions_are_canonical(p in prop_oneof![Just(2u64), Just(3), Just(7)], seed in any::<u64>()) {
        let mut rng = hahn_core::sample::rng(seed);
        let x = hahn_core::sample::nonzero_coefficient(&mut rng, fpx(p));
        let y = hahn_core::sample::nonzero_coefficient(&mut rng, fpx(p));
        let Ok(FieldElement::RatFn(r)) = x.checked_mul(&y.inv().unwrap()) else {
            return Err(TestCaseError::fail("F_p(x) elements are rational functions"));
        };
        let again = RatFn::new(r.numerator().clone(), r.denominator().clone()).unwrap();
        prop_assert_eq!(&again, &r);
        prop_assert_eq!(r.denominator().clone(), r.denominator().monic());
        prop_assert!(r.numerator().gcd(r.denominator()).degree() == Some(0));
    }
}

#[test]
fn characteristic_kills_one() {
    for field in [fp(2), fp(3), fp(13), fpx(5)] {
        let p = field.characteristic();
        assert!(field.from_i64(p as i64).is_zero(), "{field}");
        for n in 1..p {
            assert!(!field.from_i64(n as i64).is_zero(), "{field} {n}");
        }
    }
    assert_eq!(q().characteristic(), 0);
    for n in 1..=100 {
        assert!(!q().from_i64(n).is_zero());
    }
}

#[test]
fn size_assumptions() {
    assert!(fp(2).is_f2());
    assert!(!fp(3).is_f2());
    assert!(q().is_large());
    assert!(fpx(2).is_large());
    assert!(!fp(101).is_large());
}
