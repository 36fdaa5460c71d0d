use super::*;
use crate::coefficients::{FieldDescriptor, FieldElement, FpPoly, RatFn};
use crate::exponents::{GroupDescriptor, GroupElement};
use crate::parallel::Exec;
use crate::series::{Domain, Horizon, Series};
use crate::supports::{CheckBudget, Condition, FamilyDescriptor, RegionDescriptor, SupportSet, Witness};

const Z: GroupDescriptor = GroupDescriptor::Integers;
const Q: FieldDescriptor = FieldDescriptor::Rationals;

fn horizon(b: i64) -> Horizon {
    Horizon::new(GroupElement::from(b), 10_000).unwrap()
}

fn budget() -> CheckBudget {
    CheckBudget::new(horizon(10))
}

fn set(v: &[i64]) -> SupportSet {
    SupportSet::finite(v.iter().map(|&x| GroupElement::from(x)))
}

fn lit(d: Domain, terms: &[(i64, FieldElement)]) -> Series {
    Series::literal(d, terms.iter().map(|(e, c)| (GroupElement::from(*e), c.clone()))).unwrap()
}

fn q(v: i64) -> FieldElement {
    Q.from_i64(v)
}

#[test]
fn whole_group_is_a_rayner_field() {
    let c = classify_khull(Z, Q, &FamilyDescriptor::W(RegionDescriptor::WholeGroup), &budget());
    for (name, flag) in c.flags() {
        assert!(flag.is_yes(), "{name}: {flag}");
    }
}

#[test]
fn valuation_ring() {
    let c = classify_khull(Z, Q, &FamilyDescriptor::W(RegionDescriptor::NonNegCone), &budget());
    assert!(c.additive_subgroup.is_yes());
    assert!(c.subring.is_yes());
    assert!(c.has_identity.is_yes());
    assert!(c.subfield.is_no(), "{}", c.subfield);
    assert!(c.hahn_field.is_no());
    let Flag::No { failed, .. } = &c.rayner_field else { panic!("rayner: {}", c.rayner_field) };
    assert!(failed.iter().any(|(cond, _)| *cond == Condition::A3));
    assert!(c.verdict(Condition::A3).fails());
}

#[test]
fn finite_supports_fail_finite_sums() {
    let c = classify_khull(Z, Q, &FamilyDescriptor::Fin(RegionDescriptor::WholeGroup), &budget());
    assert!(c.subring.is_yes() && c.has_identity.is_yes());
    let Flag::No { failed, .. } = &c.subfield else { panic!("subfield: {}", c.subfield) };
    let (cond, witness) = &failed[0];
    assert_eq!(*cond, Condition::A4);
    let Witness::Missing { members, .. } = witness else { panic!("{witness}") };
    assert_eq!(members, &vec![set(&[1])]);
    assert!(c.hahn_field.is_no() && c.rayner_field.is_no());
}

#[test]
fn trivial_group_has_one_rayner_family() {
    let g = GroupDescriptor::Trivial;
    for field in [Q, FieldDescriptor::prime_field(2).unwrap(), FieldDescriptor::prime_field(3).unwrap()] {
        let rayner: Vec<String> = descriptor_catalog(g)
            .into_iter()
            .filter(|f| classify_khull(g, field, f, &budget()).rayner_field.is_yes())
            .map(|f| f.to_string())
            .collect();
        assert_eq!(rayner.len(), 3, "{rayner:?}");
        let e = SupportSet::empty();
        let z = SupportSet::singleton(g.zero());
        let only = FamilyDescriptor::explicit([e.clone(), z.clone()]);
        assert!(classify_khull(g, field, &only, &budget()).rayner_field.is_yes());
        assert!(!classify_khull(g, field, &FamilyDescriptor::explicit([e]), &budget()).rayner_field.is_yes());
        assert!(!classify_khull(g, field, &FamilyDescriptor::explicit([z]), &budget()).rayner_field.is_yes());
    }
}

#[test]
fn f2_leaves_the_group_converse_open() {
    let f2 = FieldDescriptor::prime_field(2).unwrap();
    let family = FamilyDescriptor::explicit([set(&[]), set(&[0]), set(&[1])]);
    let c = classify_khull(Z, f2, &family, &budget());
    match &c.additive_subgroup {
        Flag::Unknown(reason) => assert!(reason.contains("k_is_F2")),
        other => panic!("{other}"),
    }
    let c = classify_khull(Z, Q, &family, &budget());
    assert!(c.additive_subgroup.is_no());
}

#[test]
fn catalog_is_consistent() {
    let report = classify_catalog(Z, Q, &budget());
    assert_eq!(report.status, Status::Pass, "{}", report.to_json());
}

#[test]
fn product_support_examples() {
    let d = Domain::new(Z, Q);
    let h = horizon(10);
    let r = verify_product_support(&lit(d, &[(2, q(1)), (3, q(1))]), &lit(d, &[(0, q(1)), (1, q(1))]), &h)
        .unwrap();
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.details["product_support"], serde_json::json!(["2", "3", "4"]));
    let r = verify_product_support(&lit(d, &[(0, q(1)), (1, q(1))]), &lit(d, &[(0, q(1)), (1, q(-1))]), &h)
        .unwrap();
    assert_eq!(r.status, Status::HypothesisUnmet);
    assert_eq!(r.witness, Some(serde_json::json!({"cancelled": "1"})));
    let d2 = Domain::new(Z, FieldDescriptor::rational_functions(2).unwrap());
    let xp = |k: usize| FieldElement::RatFn(RatFn::from_poly(FpPoly::monomial(k, 2)));
    let r =
        verify_product_support(&lit(d2, &[(0, xp(0)), (1, xp(1))]), &lit(d2, &[(0, xp(0)), (1, xp(2))]), &h)
            .unwrap();
    assert_eq!(r.status, Status::Pass, "{}", r.to_json());
    assert_eq!(r.details["product_support"], serde_json::json!(["0", "1", "2"]));
}

#[test]
fn neumann_examples() {
    let d = Domain::new(Z, Q);
    let r = verify_neumann_support(&lit(d, &[(2, q(1)), (3, q(1))]), &horizon(7)).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.details["inverse_support"], serde_json::json!(["0", "2", "3", "4", "5", "6", "7"]));
    let r = verify_neumann_support(&lit(d, &[(1, q(1))]), &horizon(5)).unwrap();
    assert_eq!(r.status, Status::Pass);
    let f3 = Domain::new(Z, FieldDescriptor::prime_field(3).unwrap());
    let one = f3.field.one();
    let a = lit(f3, &[(1, one.clone()), (3, one.negated())]);
    assert_eq!(verify_neumann_support(&a, &horizon(5)).unwrap().status, Status::HypothesisUnmet);
}

#[test]
fn fp_gap_for_small_primes() {
    for p in [2, 3, 5, 7, 11, 13] {
        let r = verify_fp_gap(p, &horizon(10)).unwrap();
        assert_eq!(r.status, Status::BoundedPass, "{}", r.to_json());
        assert_eq!(r.details["coefficient_at_p"], "0");
    }
    assert!(verify_fp_gap(4, &horizon(10)).is_err());
}

#[test]
fn truncation_search() {
    for (n, b) in [(0, 10), (2, 15), (6, 30)] {
        for exec in [Exec::Sequential, Exec::Parallel] {
            let r = refute_truncation_closure_f2(n, &horizon(b), exec).unwrap();
            assert_eq!(r.status, Status::BoundedPass, "{}", r.to_json());
        }
    }
}

#[test]
fn equivalence_examples() {
    let b = budget();
    let r = check_equivalence_lemma(Z, &FamilyDescriptor::W(RegionDescriptor::WholeGroup), &b).unwrap();
    assert_eq!(r.status, Status::Pass);
    let r = check_equivalence_lemma(Z, &FamilyDescriptor::W(RegionDescriptor::NonNegCone), &b).unwrap();
    assert_eq!(r.status, Status::HypothesisUnmet);
    assert_eq!(r.details["hypotheses"]["A3"]["outcome"], "fails");
    let r = check_equivalence_lemma(Z, &FamilyDescriptor::explicit([set(&[]), set(&[0])]), &b).unwrap();
    assert_eq!(r.details["conditions"]["S1"]["outcome"], "fails");
    assert_eq!(r.details["conditions"]["A1"]["outcome"], "fails");
}

#[test]
fn closure_probe_examples() {
    let b = budget();
    let all = FamilyDescriptor::explicit(
        (0u32..8).map(|m| SupportSet::finite((0..3).filter(|i| m >> i & 1 == 1).map(GroupElement::from))),
    );
    let r = brute_force_closure_probe(Z, Q, &all, ProbeOp::Add, &b).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.details["closed"], true);
    let small = FamilyDescriptor::explicit([set(&[]), set(&[0]), set(&[1])]);
    let r = brute_force_closure_probe(Z, Q, &small, ProbeOp::Add, &b).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.details["closed"], false);
    assert_eq!(r.witness.as_ref().unwrap()["support"], "{0,1}");
    let r = brute_force_closure_probe(Z, Q, &small, ProbeOp::Mul, &b).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.witness.as_ref().unwrap()["support"], "{2}");
    let f2 = FieldDescriptor::prime_field(2).unwrap();
    assert!(matches!(
        brute_force_closure_probe(Z, f2, &small, ProbeOp::Add, &b),
        Err(TheoremError::Support(crate::supports::SupportError::FieldTooSmall))
    ));
}

#[test]
fn suite_runs_and_orders() {
    for exec in [Exec::Sequential, Exec::Parallel] {
        let reports = run_suite(&SuiteConfig { exec, ..SuiteConfig::default() }).unwrap();
        for r in &reports {
            assert!(!r.status.is_failure(), "{}", r.to_json());
        }
        let fp: Vec<_> = reports.iter().filter(|r| r.procedure == "verify_fp_gap").collect();
        assert_eq!(fp.len(), 6);
    }
    let only = run_suite(&SuiteConfig { filter: Some("fp-gap".into()), ..SuiteConfig::default() }).unwrap();
    assert!(only.iter().all(|r| r.procedure == "verify_fp_gap" && r.status == Status::BoundedPass));
    assert!(run_suite(&SuiteConfig { filter: Some("nothing".into()), ..SuiteConfig::default() }).is_err());
}
