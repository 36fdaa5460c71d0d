use serde_json::json;

use super::{
    brute_force_closure_probe, check_equivalence_lemma, classify_khull, refute_truncation_closure_f2,
    verify_fp_gap, verify_neumann_support, verify_product_support, ProbeOp, Report, Status, TheoremError,
};
use crate::coefficients::{FieldDescriptor, FieldElement, FpPoly, RatFn};
use crate::exponents::{GroupDescriptor, GroupElement};
use crate::parallel::Exec;
use crate::sample;
use crate::series::{Domain, Horizon, Series, SeriesError};
use crate::supports::{CheckBudget, FamilyDescriptor, RegionDescriptor, SupportSet};

/// Names accepted by `--filter`, in output order.
pub const SUITE_PROCEDURES: [&str; 7] = [
    "catalog",
    "closure-probe",
    "equivalence-lemma",
    "fp-gap",
    "neumann-support",
    "product-support",
    "truncation-f2",
];

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Runs only procedures whose name contains this string.
    pub filter: Option<String>,
    pub seed: u64,
    pub term_bound: usize,
    pub exec: Exec,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { filter: None, seed: 0, term_bound: 10_000, exec: Exec::default() }
    }
}

impl SuiteConfig {
    fn horizon(&self, bound: i64) -> Result<Horizon, TheoremError> {
        self.horizon_in(GroupDescriptor::Integers, bound)
    }

    fn horizon_in(&self, group: GroupDescriptor, bound: i64) -> Result<Horizon, TheoremError> {
        Ok(Horizon::new(group.multiple_of_unit(bound), self.term_bound)?)
    }

    fn budget(&self, bound: i64) -> Result<CheckBudget, TheoremError> {
        Ok(CheckBudget::new(self.horizon(bound)?))
    }
}

/// Runs the selected verifiers with their default parameters. Reports come
/// back grouped by procedure name in [`SUITE_PROCEDURES`] order, whatever the
/// execution mode.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<Report>, TheoremError> {
    let selected: Vec<&str> = SUITE_PROCEDURES
        .iter()
        .copied()
        .filter(|name| config.filter.as_deref().is_none_or(|f| name.contains(f)))
        .collect();
    if selected.is_empty() {
        return Err(TheoremError::InvalidParameter(format!(
            "no procedure matches `{}` (known: {})",
            config.filter.as_deref().unwrap_or_default(),
            SUITE_PROCEDURES.join(", ")
        )));
    }
    let batches = config.exec.map(selected, |name| run_one(name, config));
    let mut out = Vec::new();
    for batch in batches {
        out.extend(batch?);
    }
    Ok(out)
}

fn run_one(name: &str, config: &SuiteConfig) -> Result<Vec<Report>, TheoremError> {
    match name {
        "catalog" => catalog(config),
        "closure-probe" => closure_probe(config),
        "equivalence-lemma" => equivalence(config),
        "fp-gap" => fp_gap(config),
        "neumann-support" => neumann(config),
        "product-support" => product(config),
        "truncation-f2" => truncation(config),
        _ => unreachable!("names come from SUITE_PROCEDURES"),
    }
}

fn set(v: &[i64]) -> SupportSet {
    SupportSet::finite(v.iter().map(|&x| GroupElement::from(x)))
}

fn explicit(members: &[&[i64]]) -> FamilyDescriptor {
    FamilyDescriptor::explicit(members.iter().map(|m| set(m)))
}

/// Region and explicit descriptors used to cross-check the classifier.
pub fn descriptor_catalog(group: GroupDescriptor) -> Vec<FamilyDescriptor> {
    use FamilyDescriptor::{Fin, W};
    use RegionDescriptor::*;
    if group.is_trivial() {
        let zero = group.zero();
        let e = SupportSet::empty;
        let z = || SupportSet::singleton(zero.clone());
        return vec![
            W(WholeGroup),
            Fin(WholeGroup),
            W(PosCone),
            FamilyDescriptor::explicit([e(), z()]),
            FamilyDescriptor::explicit([e()]),
            FamilyDescriptor::explicit([z()]),
            FamilyDescriptor::explicit([]),
        ];
    }
    let mut out =
        vec![W(WholeGroup), W(NonNegCone), W(PosCone), Fin(WholeGroup), Fin(NonNegCone), Fin(PosCone)];
    if group == GroupDescriptor::Integers {
        let g = |v: &[i64]| v.iter().map(|&x| GroupElement::from(x)).collect::<Vec<_>>();
        out.extend([
            W(SubmonoidGen(g(&[2, 3]))),
            W(SubgroupGen(g(&[2]))),
            Fin(SubgroupGen(g(&[2]))),
            W(FiniteSet(g(&[0, 1]))),
            Fin(FiniteSet(g(&[0]))),
            explicit(&[&[], &[0]]),
            explicit(&[&[]]),
            explicit(&[&[], &[0], &[1]]),
            explicit(&[&[], &[0], &[1], &[0, 1]]),
        ]);
    }
    out
}

/// Consistency of the classifier over the catalog: the structure flags are
/// nested, Rayner implies Hahn, and in characteristic 0 Hahn and Rayner agree
/// and Hahn fields are restriction closed.
pub fn classify_catalog(group: GroupDescriptor, field: FieldDescriptor, budget: &CheckBudget) -> Report {
    let mut report = Report::new(
        "classify_khull",
        "Rayner fields are Hahn fields; in characteristic 0 the converse holds",
    )
    .param("group", group.to_string())
    .param("field", field.to_string());
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for family in descriptor_catalog(group) {
        let c = classify_khull(group, field, &family, budget);
        let mut broken = Vec::new();
        if c.rayner_field.is_yes() && !c.hahn_field.is_yes() {
            broken.push("rayner without hahn");
        }
        if c.hahn_field.is_yes() && !c.subfield.is_yes() {
            broken.push("hahn without subfield");
        }
        if c.subfield.is_yes() && !c.subring.is_yes() {
            broken.push("subfield without subring");
        }
        if c.subring.is_yes() && !c.additive_subgroup.is_yes() {
            broken.push("subring without group");
        }
        if c.assumptions.char_k == 0 {
            if c.hahn_field.is_yes() != c.rayner_field.is_yes()
                || c.hahn_field.is_no() != c.rayner_field.is_no()
            {
                broken.push("hahn and rayner disagree in characteristic 0");
            }
            if c.hahn_field.is_yes() && !c.restriction_closed.is_yes() {
                broken.push("hahn field not restriction closed");
            }
        }
        let flags: serde_json::Map<String, serde_json::Value> = c
            .flags()
            .iter()
            .map(|(n, f)| {
                let v = if f.is_yes() {
                    "yes"
                } else if f.is_no() {
                    "no"
                } else {
                    "unknown"
                };
                (n.to_string(), json!(v))
            })
            .collect();
        rows.push(json!({"family": family.to_string(), "flags": flags}));
        if !broken.is_empty() {
            violations.push(json!({"family": family.to_string(), "violations": broken}));
        }
    }
    report.details = json!({"families": rows});
    if !violations.is_empty() {
        report.status = Status::Fail;
        report.witness = Some(json!(violations));
    }
    report
}

fn catalog(config: &SuiteConfig) -> Result<Vec<Report>, TheoremError> {
    let fields = [
        FieldDescriptor::Rationals,
        FieldDescriptor::prime_field(2).map_err(SeriesError::from)?,
        FieldDescriptor::prime_field(3).map_err(SeriesError::from)?,
        FieldDescriptor::rational_functions(5).map_err(SeriesError::from)?,
    ];
    let mut out = Vec::new();
    for group in [GroupDescriptor::Integers, GroupDescriptor::Rationals, GroupDescriptor::Trivial] {
        let budget = CheckBudget::new(config.horizon_in(group, 10)?);
        for field in fields {
            out.push(classify_catalog(group, field, &budget));
        }
    }
    Ok(out)
}

fn closure_probe(config: &SuiteConfig) -> Result<Vec<Report>, TheoremError> {
    let budget = config.budget(10)?;
    let q = FieldDescriptor::Rationals;
    let z = GroupDescriptor::Integers;
    let all_of_012 = FamilyDescriptor::explicit(
        (0u32..8).map(|m| SupportSet::finite((0..3).filter(|i| m >> i & 1 == 1).map(GroupElement::from))),
    );
    let small = explicit(&[&[], &[0], &[1]]);
    let mut out = vec![
        brute_force_closure_probe(z, q, &all_of_012, ProbeOp::Add, &budget)?,
        brute_force_closure_probe(z, q, &small, ProbeOp::Add, &budget)?,
        brute_force_closure_probe(z, q, &small, ProbeOp::Mul, &budget)?,
    ];
    let mut rng = sample::rng(config.seed);
    for _ in 0..20 {
        let family = sample::explicit_family(&mut rng, -3, 3);
        out.push(brute_force_closure_probe(z, q, &family, ProbeOp::Add, &budget)?);
    }
    Ok(out)
}

fn equivalence(config: &SuiteConfig) -> Result<Vec<Report>, TheoremError> {
    let budget = config.budget(10)?;
    let z = GroupDescriptor::Integers;
    let families = [
        FamilyDescriptor::W(RegionDescriptor::WholeGroup),
        FamilyDescriptor::W(RegionDescriptor::NonNegCone),
        FamilyDescriptor::Fin(RegionDescriptor::WholeGroup),
        FamilyDescriptor::W(RegionDescriptor::SubgroupGen(vec![GroupElement::from(2)])),
        explicit(&[&[], &[0]]),
    ];
    families.iter().map(|f| check_equivalence_lemma(z, f, &budget)).collect()
}

fn fp_gap(config: &SuiteConfig) -> Result<Vec<Report>, TheoremError> {
    let h = config.horizon(10)?;
    [2, 3, 5, 7, 11, 13].into_iter().map(|p| verify_fp_gap(p, &h)).collect()
}

fn neumann(config: &SuiteConfig) -> Result<Vec<Report>, TheoremError> {
    let d = Domain::new(GroupDescriptor::Integers, FieldDescriptor::Rationals);
    let one = FieldDescriptor::Rationals.one();
    let t = |e: i64| Series::monomial(d, one.clone(), GroupElement::from(e));
    let mut out = vec![
        verify_neumann_support(&t(2)?.try_add(&t(3)?)?, &config.horizon(7)?)?,
        verify_neumann_support(&t(1)?, &config.horizon(10)?)?,
    ];
    let mut rng = sample::rng(config.seed);
    let hz = config.horizon(20)?;
    let hq = config.horizon_in(GroupDescriptor::Rationals, 20)?;
    for _ in 0..5 {
        out.push(verify_neumann_support(&sample::positive_series_integers(&mut rng, 5), &hz)?);
        out.push(verify_neumann_support(&sample::positive_series_rationals(&mut rng, 5), &hq)?);
    }
    Ok(out)
}

fn product(config: &SuiteConfig) -> Result<Vec<Report>, TheoremError> {
    let h = config.horizon(10)?;
    let z = GroupDescriptor::Integers;
    let q = Domain::new(z, FieldDescriptor::Rationals);
    let lit = |d: Domain, terms: &[(i64, FieldElement)]| {
        Series::literal(d, terms.iter().map(|(e, c)| (GroupElement::from(*e), c.clone())))
    };
    let n = |v: i64| FieldDescriptor::Rationals.from_i64(v);
    let f2x = FieldDescriptor::rational_functions(2).map_err(SeriesError::from)?;
    let r = Domain::new(z, f2x);
    let xp = |k: usize| FieldElement::RatFn(RatFn::from_poly(FpPoly::monomial(k, 2)));
    Ok(vec![
        verify_product_support(&lit(q, &[(2, n(1)), (3, n(1))])?, &lit(q, &[(0, n(1)), (1, n(1))])?, &h)?,
        verify_product_support(&lit(q, &[(0, n(1)), (1, n(1))])?, &lit(q, &[(0, n(1)), (1, n(-1))])?, &h)?,
        verify_product_support(&lit(r, &[(0, xp(0)), (1, xp(1))])?, &lit(r, &[(0, xp(0)), (1, xp(2))])?, &h)?,
    ])
}

fn truncation(config: &SuiteConfig) -> Result<Vec<Report>, TheoremError> {
    Ok(vec![
        refute_truncation_closure_f2(2, &config.horizon(15)?, config.exec)?,
        refute_truncation_closure_f2(6, &config.horizon(30)?, config.exec)?,
    ])
}
