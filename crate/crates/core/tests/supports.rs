use hahn_core::exponents::{subgroup_contains, GroupDescriptor, GroupElement};
use hahn_core::sample;
use hahn_core::series::Horizon;
use hahn_core::supports::{
    check_all_conditions, family_contains, finite_sums_closure, is_initial_segment, minkowski_sum, translate,
    CheckBudget, Condition, FamilyDescriptor, SupportSet, Verdict, Witness,
};
use hahn_core::theorems::descriptor_catalog;
use hahn_testkit::sets;
use proptest::prelude::*;

const Z: GroupDescriptor = GroupDescriptor::Integers;

fn horizon(bound: i64) -> Horizon {
    Horizon::new(GroupElement::from(bound), 10_000).unwrap()
}

fn set(v: &[i64]) -> SupportSet {
    SupportSet::finite(v.iter().map(|&x| GroupElement::from(x)))
}

fn ints(s: &SupportSet) -> Vec<i64> {
    s.elements().iter().map(|g| g.to_string().parse().unwrap()).collect()
}

fn small_set(lo: i64) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::btree_set(lo..=10, 0..=8).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn minkowski_matches_brute_force(a in small_set(-10), b in small_set(-10)) {
        let got = minkowski_sum(&set(&a), &set(&b), &horizon(100)).unwrap();
        prop_assert_eq!(ints(&got), sets::minkowski(&a, &b));
    }

    #[test]
    fn translate_matches_brute_force(a in small_set(-10), g in -10i64..=10) {
        let got = translate(&set(&a), &GroupElement::from(g));
        prop_assert_eq!(ints(&got), a.iter().map(|x| x + g).collect::<Vec<_>>());
    }

    #[test]
    fn finite_sums_match_brute_force(a in small_set(1), bound in 0i64..=40) {
        let got = finite_sums_closure(&set(&a), &horizon(bound)).unwrap();
        prop_assert_eq!(ints(&got), sets::finite_sums(&a, bound));
    }

    #[test]
    fn zero_does_not_change_finite_sums(a in small_set(1)) {
        let mut with_zero = a.clone();
        with_zero.push(0);
        let h = horizon(25);
        prop_assert_eq!(
            finite_sums_closure(&set(&with_zero), &h).unwrap(),
            finite_sums_closure(&set(&a), &h).unwrap()
        );
    }

    #[test]
    fn initial_segments_are_prefixes(a in small_set(-10), k in 0usize..=8) {
        let h = horizon(10);
        let prefix = &a[..k.min(a.len())];
        prop_assert!(is_initial_segment(&set(prefix), &set(&a), &h).unwrap());
        if prefix.len() + 1 < a.len() {
            let mut gap = prefix.to_vec();
            gap.push(a[prefix.len() + 1]);
            prop_assert!(!is_initial_segment(&set(&gap), &set(&a), &h).unwrap());
        }
    }
}

fn budget(group: GroupDescriptor) -> CheckBudget {
    CheckBudget::new(Horizon::new(group.multiple_of_unit(12), 10_000).unwrap())
}

fn random_families(count: usize) -> Vec<(GroupDescriptor, FamilyDescriptor)> {
    let mut rng = sample::rng(99);
    let trivial = GroupDescriptor::Trivial;
    let mut out: Vec<(GroupDescriptor, FamilyDescriptor)> =
        (0..count).map(|_| (Z, sample::explicit_family(&mut rng, -3, 3))).collect();
    out.extend(descriptor_catalog(Z).into_iter().map(|f| (Z, f)));
    out.extend(descriptor_catalog(trivial).into_iter().map(|f| (trivial, f)));
    out
}

#[test]
fn implication_graph() {
    use Condition::*;
    let implications = [(S1, S4), (S4, S5), (S2, S6), (S1, A1), (S1, A5)];
    for (group, family) in random_families(1000) {
        let verdicts = check_all_conditions(group, &family, &budget(group));
        let verdict = |c: Condition| &verdicts.iter().find(|(x, _)| *x == c).unwrap().1;
        for (premise, conclusion) in implications {
            if verdict(premise).holds() {
                assert!(!verdict(conclusion).fails(), "{family}: {premise} holds but {conclusion} fails");
            }
        }
    }
}

fn union_of(members: &[SupportSet]) -> Vec<GroupElement> {
    members.iter().flat_map(|m| m.elements().iter().cloned()).collect()
}

/// Re-derives a failure witness from the condition's definition.
fn witness_is_genuine(
    group: GroupDescriptor,
    family: &FamilyDescriptor,
    c: Condition,
    w: &Witness,
) -> Result<(), String> {
    let h = Horizon::new(group.multiple_of_unit(12), 10_000).unwrap();
    let member = |s: &SupportSet| family_contains(family, s, 12).is_member();
    let non_member = |s: &SupportSet| family_contains(family, s, 12).is_non_member();
    match w {
        Witness::EmptyFamily => match family {
            FamilyDescriptor::Explicit(m) if m.is_empty() && c == Condition::S5 => Ok(()),
            _ => Err("empty-family witness for a nonempty family".into()),
        },
        Witness::Ungenerated(g) => {
            let FamilyDescriptor::Explicit(members) = family else {
                return Ok(());
            };
            (c == Condition::A1 && !subgroup_contains(&union_of(members), g))
                .then_some(())
                .ok_or_else(|| format!("{g} is generated"))
        }
        Witness::Missing { required, members, shift } => {
            if !members.iter().all(member) {
                return Err("a witness member is not in the family".into());
            }
            if !non_member(required) {
                return Err(format!("{required} is in the family"));
            }
            let zero = group.zero();
            let built = match c {
                Condition::S1 => required.elements().len() == 1,
                Condition::S2 => required.elements().iter().all(|g| members[0].contains(g)),
                Condition::S3 => {
                    let mut u = union_of(members);
                    u.sort();
                    u.dedup();
                    required.elements() == u.as_slice()
                }
                Condition::S4 => required.elements() == [zero],
                Condition::S6 => is_initial_segment(required, &members[0], &h).unwrap_or(false),
                Condition::A2 => {
                    minkowski_sum(&members[0], &members[1], &h).map_err(|e| e.to_string())? == *required
                }
                Condition::A3 => shift
                    .as_ref()
                    .is_some_and(|g| translate(&members[0], g).elements() == required.elements()),
                Condition::A4 => {
                    let bound = match required {
                        SupportSet::BoundedEnumeration { exp_bound, .. } => h.with_bound(exp_bound.clone()),
                        SupportSet::ExplicitFinite(_) => h.clone(),
                    };
                    let sums = finite_sums_closure(&members[0], &bound).map_err(|e| e.to_string())?;
                    required.elements() == sums.elements()
                }
                Condition::A5 => {
                    members[0].elements().len() == 1
                        && required.elements() == [members[0].elements()[0].negated()]
                }
                Condition::S5 | Condition::A1 => false,
            };
            built.then_some(()).ok_or_else(|| format!("{required} is not built from {members:?} by {c}"))
        }
    }
}

#[test]
fn failure_witnesses_are_genuine() {
    let mut failures = 0;
    for (group, family) in random_families(300) {
        for (c, v) in check_all_conditions(group, &family, &budget(group)) {
            if let Verdict::Fails(w) = &v {
                failures += 1;
                if let Err(e) = witness_is_genuine(group, &family, c, w) {
                    panic!("{family} {c}: {w}: {e}");
                }
            }
        }
    }
    assert!(failures > 300, "only {failures} failures were exercised");
}

#[test]
fn holds_verdicts_match_brute_force_on_explicit_families() {
    let mut rng = sample::rng(7);
    for _ in 0..300 {
        let family = sample::explicit_family(&mut rng, -3, 3);
        let FamilyDescriptor::Explicit(members) = &family else { unreachable!() };
        let m: Vec<Vec<i64>> = members.iter().map(ints).collect();
        let verdicts = check_all_conditions(Z, &family, &budget(Z));
        let verdict = |c: Condition| &verdicts.iter().find(|(x, _)| *x == c).unwrap().1;
        assert_eq!(verdict(Condition::S2).holds(), sets::closed_under_subsets(&m), "{family}");
        assert_eq!(verdict(Condition::S3).holds(), sets::closed_under_unions(&m), "{family}");
        assert_eq!(verdict(Condition::A2).holds(), sets::closed_under_sums(&m), "{family}");
        assert_eq!(verdict(Condition::S5).holds(), !m.is_empty(), "{family}");
        assert_eq!(verdict(Condition::S4).holds(), m.contains(&vec![0]), "{family}");
    }
}
