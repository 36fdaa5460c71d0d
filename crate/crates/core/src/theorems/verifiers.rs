use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::{Report, Status, TheoremError};
use crate::coefficients::{is_prime, FieldDescriptor, FieldElement};
use crate::exponents::{GroupDescriptor, GroupElement};
use crate::parallel::Exec;
use crate::series::{
    invert_with_witness, support_up_to, Domain, Evaluator, Horizon, Series, SeriesError, TermList,
};
use crate::supports::{
    check_condition, family_contains, finite_sums_closure, subset_witness, union_witness, CheckBudget,
    Condition, FamilyDescriptor, SupportError, SupportSet, Verdict,
};

fn strings(v: &[GroupElement]) -> Vec<String> {
    v.iter().map(|g| g.to_string()).collect()
}

fn complete(list: TermList, h: &Horizon) -> Result<TermList, TheoremError> {
    if list.is_complete() {
        Ok(list)
    } else {
        Err(SeriesError::TermBudgetExceeded { term_bound: h.term_bound }.into())
    }
}

/// Which non-cancellation argument applies to a product.
enum ProductRoute {
    PositiveRationals,
    DistinctMonomialDegrees,
}

fn product_route(la: &TermList, lb: &TermList, field: FieldDescriptor) -> Option<ProductRoute> {
    match field {
        FieldDescriptor::Rationals => {
            let positive = |l: &TermList| l.terms.iter().all(|(_, c)| c.is_strictly_positive() == Ok(true));
            (positive(la) && positive(lb)).then_some(ProductRoute::PositiveRationals)
        }
        FieldDescriptor::RationalFunctions(_) => {
            let degrees = |l: &TermList| -> Option<Vec<(GroupElement, usize)>> {
                l.terms
                    .iter()
                    .map(|(g, c)| match c {
                        FieldElement::RatFn(r) => r.as_monic_monomial().map(|d| (g.clone(), d)),
                        _ => None,
                    })
                    .collect()
            };
            let (da, db) = (degrees(la)?, degrees(lb)?);
            // every exponent of the product must collect pairwise distinct x-degrees
            let mut seen: HashSet<(GroupElement, usize)> = HashSet::new();
            for (g, d) in &da {
                for (h, e) in &db {
                    if !seen.insert((g + h, d + e)) {
                        return None;
                    }
                }
            }
            Some(ProductRoute::DistinctMonomialDegrees)
        }
        FieldDescriptor::PrimeField(_) => None,
    }
}

/// Compares `supp(ab)` with `supp(a) ⊕ supp(b)` up to the horizon. The
/// equality is guaranteed when all coefficients are positive rationals, or
/// when they are monic powers of `x` in `F_p(x)` whose degrees add up
/// differently for every pair meeting at the same exponent.
pub fn verify_product_support(a: &Series, b: &Series, h: &Horizon) -> Result<Report, TheoremError> {
    let domain = a.domain();
    let mut ev = Evaluator::new(domain, h.clone())?;
    let (va, vb) = (ev.vmin(a)?, ev.vmin(b)?);
    let la = complete(ev.term_list_at(a, &(&h.exp_bound - &vb))?, h)?;
    let lb = complete(ev.term_list_at(b, &(&h.exp_bound - &va))?, h)?;
    let product = a.try_mul(b)?;
    let lab = complete(ev.term_list(&product)?, h)?;

    let sums: BTreeSet<GroupElement> = la
        .terms
        .iter()
        .flat_map(|(g, _)| lb.terms.iter().map(move |(k, _)| g + k))
        .filter(|g| g <= &h.exp_bound)
        .collect();
    let actual: BTreeSet<GroupElement> = lab.exponents().into_iter().collect();
    let missing: Vec<GroupElement> = sums.difference(&actual).cloned().collect();
    let extra: Vec<GroupElement> = actual.difference(&sums).cloned().collect();

    let route = product_route(&la, &lb, domain.field);
    let mut report = Report::new("verify_product_support", "support of a product without cancellation")
        .param("a", a.to_string())
        .param("b", b.to_string())
        .param("domain", domain.to_string())
        .param("exp_bound", h.exp_bound.to_string());
    report.details = json!({
        "route": match route {
            Some(ProductRoute::PositiveRationals) => "positive rational coefficients",
            Some(ProductRoute::DistinctMonomialDegrees) => "monic x-power coefficients with distinct degree sums",
            None => "none",
        },
        "product_support": strings(&lab.exponents()),
        "minkowski_sum": sums.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "equal": missing.is_empty() && extra.is_empty(),
    });
    if let Some(g) = extra.first() {
        // the product can never leave A ⊕ B
        report.status = Status::Fail;
        report.witness = Some(json!({"unexpected": g.to_string()}));
    } else if route.is_none() {
        report.status = Status::HypothesisUnmet;
        if let Some(g) = missing.first() {
            report.witness = Some(json!({"cancelled": g.to_string()}));
        }
    } else if let Some(g) = missing.first() {
        report.status = Status::Fail;
        report.witness = Some(json!({"missing": g.to_string()}));
    }
    Ok(report)
}

/// Compares `supp((1 - a)^-1)` with the finite sums of `supp(a)` up to the
/// horizon, for `a` with positive rational coefficients and positive support.
pub fn verify_neumann_support(a: &Series, h: &Horizon) -> Result<Report, TheoremError> {
    let domain = a.domain();
    let mut report = Report::new("verify_neumann_support", "support of a Neumann series")
        .param("a", a.to_string())
        .param("domain", domain.to_string())
        .param("exp_bound", h.exp_bound.to_string());
    let la = complete(Evaluator::new(domain, h.clone())?.term_list(a)?, h)?;
    let bad_exponent = la.terms.iter().find(|(g, _)| !g.is_positive());
    let bad_coefficient = la.terms.iter().find(|(_, c)| c.is_strictly_positive() != Ok(true));
    if domain.field != FieldDescriptor::Rationals || bad_exponent.is_some() || bad_coefficient.is_some() {
        report.status = Status::HypothesisUnmet;
        report.details = json!({
            "field": domain.field.to_string(),
            "nonpositive_exponent": bad_exponent.map(|(g, _)| g.to_string()),
            "nonpositive_coefficient": bad_coefficient.map(|(g, c)| json!({"exp": g.to_string(), "coef": c.to_string()})),
        });
        return Ok(report);
    }

    let one_minus_a = Series::one(domain).try_sub(a)?;
    let inverse = invert_with_witness(&one_minus_a, h, Some(domain.group.zero()))?;
    let lhs = complete(Evaluator::new(domain, h.clone())?.term_list(&inverse)?, h)?.exponents();
    let supp_a = SupportSet::BoundedEnumeration {
        prefix: la.exponents(),
        exp_bound: h.exp_bound.clone(),
        complete: true,
    };
    let rhs = finite_sums_closure(&supp_a, h)?.elements().to_vec();

    let lhs_set: BTreeSet<&GroupElement> = lhs.iter().collect();
    let rhs_set: BTreeSet<&GroupElement> = rhs.iter().collect();
    let first = lhs_set.symmetric_difference(&rhs_set).min().cloned();
    report.details = json!({
        "inverse_support": strings(&lhs),
        "finite_sums": strings(&rhs),
    });
    if let Some(g) = first {
        report.status = Status::Fail;
        report.witness = Some(json!({"exponent": g.to_string(), "in_inverse_support": lhs_set.contains(g)}));
    }
    Ok(report)
}

/// Over `F_p`, with `a = t - t^p`, the coefficient of `(1 - a)^-1` at `p`
/// vanishes although `p` is a finite sum of exponents of `a`: the support of
/// the Neumann series can be strictly smaller in positive characteristic.
pub fn verify_fp_gap(p: u64, h: &Horizon) -> Result<Report, TheoremError> {
    if !is_prime(p) {
        return Err(TheoremError::InvalidParameter(format!("{p} is not prime")));
    }
    let field = FieldDescriptor::prime_field(p).map_err(SeriesError::from)?;
    let domain = Domain::new(GroupDescriptor::Integers, field);
    let pe = GroupElement::from(p as i64);
    let bound = std::cmp::max(h.exp_bound.clone(), pe.clone());
    let h = h.with_bound(bound);

    let t = Series::t_pow(domain, GroupElement::from(1))?;
    let tp = Series::t_pow(domain, pe.clone())?;
    let a = t.try_sub(&tp)?;
    let one_minus_a = Series::one(domain).try_sub(&a)?;
    let inverse = invert_with_witness(&one_minus_a, &h, Some(domain.group.zero()))?;
    let list = complete(Evaluator::new(domain, h.clone())?.term_list(&inverse)?, &h)?;
    let coefficient = list.coefficient(&pe).cloned().unwrap_or_else(|| field.zero());

    let generators = SupportSet::finite([GroupElement::from(1), pe.clone()]);
    let sums = finite_sums_closure(&generators, &h)?;
    let in_sums = sums.contains(&pe);

    let mut report = Report::new("verify_fp_gap", "vanishing Neumann coefficient in characteristic p")
        .param("p", p)
        .param("exp_bound", h.exp_bound.to_string());
    report.details = json!({
        "a": a.to_string(),
        "inverse": list.to_string(),
        "coefficient_at_p": coefficient.to_string(),
        "p_in_finite_sums": in_sums,
    });
    report.status = if coefficient.is_zero() && in_sums {
        Status::BoundedPass
    } else {
        report.witness =
            Some(json!({"coefficient_at_p": coefficient.to_string(), "p_in_finite_sums": in_sums}));
        Status::Fail
    };
    Ok(report)
}

/// Bits `0..=bound` of an `F_2` expansion.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn zero(bound: usize) -> Self {
        Bits(vec![0; bound / 64 + 1])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn xor_assign(&mut self, other: &Bits) {
        for (x, y) in self.0.iter_mut().zip(&other.0) {
            *x ^= y;
        }
    }

    fn shifted(&self, by: usize, bound: usize) -> Bits {
        let mut out = Bits::zero(bound);
        for i in 0..=bound.saturating_sub(by) {
            if i + by <= bound && self.get(i) {
                out.set(i + by);
            }
        }
        out
    }
}

/// Polynomial in `s` with coefficient vector given by the bits of `mask`.
fn combine(mask: u64, powers: &[Bits], bound: usize) -> Bits {
    let mut out = Bits::zero(bound);
    for (j, pw) in powers.iter().enumerate() {
        if mask >> j & 1 == 1 {
            out.xor_assign(pw);
        }
    }
    out
}

const MAX_SEARCH_DEGREE: usize = 20;

/// With `s = t^2 + t^3` over `F_2`, searches all polynomials `p`, `q != 0` of
/// degree at most `max_degree` for `t^2 q(s) = p(s)` up to the horizon. No
/// match means `t^2` stays outside `F_2(s)` as far as the bounds can see.
pub fn refute_truncation_closure_f2(
    max_degree: usize,
    h: &Horizon,
    exec: Exec,
) -> Result<Report, TheoremError> {
    if max_degree > MAX_SEARCH_DEGREE {
        return Err(TheoremError::SearchBudget(format!(
            "max_degree {max_degree} needs 2^{} polynomial pairs",
            2 * (max_degree + 1)
        )));
    }
    let bound = match &h.exp_bound {
        GroupElement::Int(b) => b.to_usize().filter(|&b| b >= 2),
        _ => None,
    }
    .ok_or_else(|| {
        TheoremError::InvalidParameter("exp_bound must be an integer of at least 2".to_string())
    })?;

    let domain =
        Domain::new(GroupDescriptor::Integers, FieldDescriptor::prime_field(2).map_err(SeriesError::from)?);
    let s = Series::literal(
        domain,
        [(GroupElement::from(2), domain.field.one()), (GroupElement::from(3), domain.field.one())],
    )?;
    let mut ev = Evaluator::new(domain, h.clone())?;
    let mut powers = Vec::with_capacity(max_degree + 1);
    let mut power = Series::one(domain);
    for _ in 0..=max_degree {
        let list = complete(ev.term_list(&power)?, h)?;
        let mut bits = Bits::zero(bound);
        for (g, _) in &list.terms {
            if let GroupElement::Int(v) = g {
                bits.set(v.to_usize().expect("powers of s have nonnegative exponents"));
            }
        }
        powers.push(bits);
        power = power.try_mul(&s)?;
    }

    let count = 1u64 << (max_degree + 1);
    let images: HashSet<Bits> = (0..count).map(|m| combine(m, &powers, bound)).collect();
    let by_image: BTreeMap<Vec<u64>, u64> = (0..count).map(|m| (combine(m, &powers, bound).0, m)).collect();
    let hit = exec.find_map_first((1..count).collect(), |q| {
        let lhs = combine(q, &powers, bound).shifted(2, bound);
        images.contains(&lhs).then(|| (by_image[&lhs.0], q))
    });

    let poly = |mask: u64| -> String {
        let terms: Vec<String> = (0..=max_degree)
            .filter(|j| mask >> j & 1 == 1)
            .map(|j| match j {
                0 => "1".to_string(),
                1 => "s".to_string(),
                _ => format!("s^{j}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    };

    let mut report =
        Report::new("refute_truncation_closure_F2", "F2(s) with s = t^2 + t^3 is not truncation closed")
            .param("max_degree", max_degree)
            .param("exp_bound", bound);
    let pairs = (count - 1) * count;
    report.details = json!({
        "pairs_checked": pairs,
        "summary": format!(
            "verified up to degree {max_degree}, horizon {bound}; a bounded confirmation, not a proof"
        ),
    });
    match hit {
        None => report.status = Status::BoundedPass,
        Some((p, q)) => {
            report.status = Status::Fail;
            report.witness = Some(json!({"p": poly(p), "q": poly(q)}));
        }
    }
    Ok(report)
}

/// Under subsets, finite sums and translations in a nontrivial group, the
/// conditions "nonempty", "{0} a member", "all singletons" and "generates G"
/// coincide. Checks that the computed verdicts respect this.
pub fn check_equivalence_lemma(
    group: GroupDescriptor,
    family: &FamilyDescriptor,
    budget: &CheckBudget,
) -> Result<Report, TheoremError> {
    family.validate(group)?;
    use Condition::*;
    let verdict = |c| check_condition(group, family, c, budget);
    let hypotheses: Vec<(Condition, Verdict)> = [S2, A4, A3].into_iter().map(|c| (c, verdict(c))).collect();
    let conclusions: Vec<(Condition, Verdict)> =
        [S5, S4, S1, A1].into_iter().map(|c| (c, verdict(c))).collect();
    let as_json = |list: &[(Condition, Verdict)]| -> Value {
        Value::Object(list.iter().map(|(c, v)| (c.to_string(), v.to_json())).collect())
    };

    let mut report = Report::new(
        "check_equivalence_lemma",
        "nonempty, {0}, singletons and generation agree under subsets, finite sums and translations",
    )
    .param("group", group.to_string())
    .param("family", family.to_string());
    report.details = json!({
        "group_nontrivial": !group.is_trivial(),
        "hypotheses": as_json(&hypotheses),
        "conditions": as_json(&conclusions),
    });
    if group.is_trivial() || !hypotheses.iter().all(|(_, v)| v.holds()) {
        report.status = Status::HypothesisUnmet;
        return Ok(report);
    }
    let held: Vec<&Condition> = conclusions.iter().filter(|(_, v)| v.holds()).map(|(c, _)| c).collect();
    let failed: Vec<&Condition> = conclusions.iter().filter(|(_, v)| v.fails()).map(|(c, _)| c).collect();
    if !held.is_empty() && !failed.is_empty() {
        report.status = Status::Fail;
        report.witness = Some(json!({
            "holds": held.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "fails": failed.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        }));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeOp {
    Add,
    Mul,
}

impl ProbeOp {
    pub fn name(self) -> &'static str {
        match self {
            ProbeOp::Add => "add",
            ProbeOp::Mul => "mul",
        }
    }
}

impl std::str::FromStr for ProbeOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "add" => Ok(ProbeOp::Add),
            "mul" => Ok(ProbeOp::Mul),
            _ => Err(format!("unknown operation `{s}` (expected add or mul)")),
        }
    }
}

/// A series built from members whose support left the family.
struct Escape {
    support: SupportSet,
    construction: String,
    operands: Vec<SupportSet>,
}

struct Prober<'a> {
    family: &'a FamilyDescriptor,
    domain: Domain,
    term_bound: usize,
    max_len: usize,
    checked: usize,
}

impl Prober<'_> {
    fn support(&self, s: &Series, bound: GroupElement) -> Result<SupportSet, TheoremError> {
        let h = Horizon::new(bound, self.term_bound)?;
        Ok(SupportSet::finite(support_up_to(s, &h)?))
    }

    fn bound_of(&self, sets: &[&SupportSet]) -> GroupElement {
        sets.iter()
            .filter_map(|s| s.elements().last())
            .max()
            .cloned()
            .unwrap_or_else(|| self.domain.group.zero())
    }

    /// `None` when the support is a member; an escape otherwise.
    fn test(&mut self, support: SupportSet, construction: &str, operands: &[&SupportSet]) -> Option<Escape> {
        self.checked += 1;
        (!family_contains(self.family, &support, self.max_len).is_member()).then(|| Escape {
            support,
            construction: construction.to_string(),
            operands: operands.iter().map(|s| (*s).clone()).collect(),
        })
    }

    fn additive(&mut self, members: &[SupportSet]) -> Result<Option<Escape>, TheoremError> {
        for a in members {
            let xs = a.elements();
            for mask in 0u64..(1 << xs.len()) {
                let b =
                    SupportSet::finite((0..xs.len()).filter(|i| mask >> i & 1 == 1).map(|i| xs[i].clone()));
                let (sa, sc) = subset_witness(a, &b, self.domain)?;
                let support = self.support(&sa.try_add(&sc)?, self.bound_of(&[a]))?;
                if let Some(e) = self.test(support, "subset witness a + c", &[a, &b]) {
                    return Ok(Some(e));
                }
            }
        }
        for a in members {
            for b in members {
                let (sa, sb) = union_witness(a, b, self.domain)?;
                let support = self.support(&sa.try_add(&sb)?, self.bound_of(&[a, b]))?;
                if let Some(e) = self.test(support, "union witness a + b", &[a, b]) {
                    return Ok(Some(e));
                }
            }
        }
        Ok(None)
    }

    /// `sum_{g in A} t^g`, with distinct powers of `x` over `F_p(x)` so that
    /// products of two such series never cancel.
    fn spread(&self, a: &SupportSet, stride: usize) -> Result<Series, TheoremError> {
        let field = self.domain.field;
        let terms: Vec<(GroupElement, FieldElement)> = a
            .elements()
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let c = match field {
                    FieldDescriptor::RationalFunctions(p) => {
                        FieldElement::RatFn(crate::coefficients::RatFn::from_poly(
                            crate::coefficients::FpPoly::monomial(i * stride, p),
                        ))
                    }
                    _ => field.one(),
                };
                (g.clone(), c)
            })
            .collect();
        Ok(Series::literal(self.domain, terms)?)
    }

    fn multiplicative(&mut self, members: &[SupportSet]) -> Result<Option<Escape>, TheoremError> {
        for a in members {
            for b in members {
                let sa = self.spread(a, 1)?;
                let sb = self.spread(b, a.elements().len().max(1))?;
                let bound = match (a.elements().last(), b.elements().last()) {
                    (Some(x), Some(y)) => x + y,
                    _ => self.domain.group.zero(),
                };
                let support = self.support(&sa.try_mul(&sb)?, bound)?;
                if let Some(e) = self.test(support, "product of indicator series", &[a, b]) {
                    return Ok(Some(e));
                }
            }
        }
        Ok(None)
    }
}

/// Builds series with supports in an explicit family, applies the operation,
/// and compares the observed closure with the characterisation: subsets,
/// unions and a nonempty family for addition, plus sums `A ⊕ B` for
/// multiplication.
pub fn brute_force_closure_probe(
    group: GroupDescriptor,
    field: FieldDescriptor,
    family: &FamilyDescriptor,
    op: ProbeOp,
    budget: &CheckBudget,
) -> Result<Report, TheoremError> {
    family.validate(group)?;
    let FamilyDescriptor::Explicit(members) = family else {
        return Err(SupportError::NotExplicit.into());
    };
    if field.is_f2() {
        return Err(SupportError::FieldTooSmall.into());
    }
    if let Some(big) = members.iter().find(|m| m.elements().len() > budget.subset_limit) {
        return Err(TheoremError::SearchBudget(format!(
            "member {big} has more than {} elements",
            budget.subset_limit
        )));
    }
    let mut prober = Prober {
        family,
        domain: Domain::new(group, field),
        term_bound: budget.horizon.term_bound,
        max_len: budget.monoid_search_length,
        checked: 0,
    };
    let escape = if members.is_empty() {
        None
    } else if op == ProbeOp::Mul {
        match prober.multiplicative(members)? {
            Some(e) => Some(e),
            None => prober.additive(members)?,
        }
    } else {
        prober.additive(members)?
    };
    let closed = !members.is_empty() && escape.is_none();

    use Condition::*;
    let mut relevant = vec![S2, S3, S5];
    if op == ProbeOp::Mul {
        relevant.push(A2);
    }
    let verdicts: Vec<(Condition, Verdict)> =
        relevant.iter().map(|&c| (c, check_condition(group, family, c, budget))).collect();
    let predicted = if verdicts.iter().all(|(_, v)| v.holds()) {
        Some(true)
    } else if verdicts.iter().any(|(_, v)| v.fails()) {
        Some(false)
    } else {
        None
    };

    let citation = match op {
        ProbeOp::Add => "additive group criterion: subsets, unions and a nonempty family",
        ProbeOp::Mul => "subring criterion: subsets, unions, a nonempty family and sums",
    };
    let mut report = Report::new("brute_force_closure_probe", citation)
        .param("group", group.to_string())
        .param("field", field.to_string())
        .param("family", family.to_string())
        .param("op", op.name());
    report.details = json!({
        "closed": closed,
        "predicted": predicted,
        "constructions_checked": prober.checked,
        "conditions": Value::Object(verdicts.iter().map(|(c, v)| (c.to_string(), v.to_json())).collect()),
    });
    if let Some(e) = &escape {
        report.witness = Some(json!({
            "support": e.support.to_string(),
            "construction": e.construction,
            "from": e.operands.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        }));
    } else if members.is_empty() {
        report.witness = Some(json!({"empty_family": true}));
    }
    report.status = match predicted {
        None => Status::HypothesisUnmet,
        Some(p) if p == closed => Status::Pass,
        Some(_) => Status::Fail,
    };
    Ok(report)
}
