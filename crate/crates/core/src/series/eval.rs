use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{Completeness, Domain, Horizon, NodeKind, Series, SeriesError, Term, TermList};
use crate::coefficients::FieldElement;
use crate::exponents::GroupElement;
use crate::sums::enumerate_finite_sums;

/// Expansion of one node up to `bound`. All terms are `<= exact_through`
/// when the prefix is truncated.
#[derive(Debug, Clone)]
struct Prefix {
    terms: Vec<Term>,
    bound: GroupElement,
    /// `None`: complete up to `bound`.
    exact_through: Option<GroupElement>,
}

impl Prefix {
    fn empty(bound: GroupElement) -> Self {
        Prefix { terms: Vec::new(), bound, exact_through: None }
    }

    fn limit(&self) -> &GroupElement {
        self.exact_through.as_ref().unwrap_or(&self.bound)
    }

    fn first_exponent(&self) -> Option<&GroupElement> {
        self.terms.first().map(|(g, _)| g)
    }

    /// Restriction of a prefix computed at a larger bound.
    fn restrict(&self, bound: &GroupElement) -> Prefix {
        let terms = self.terms.iter().take_while(|(g, _)| g <= bound).cloned().collect();
        let exact_through = self.exact_through.clone().filter(|x| x < bound);
        Prefix { terms, bound: bound.clone(), exact_through }
    }
}

/// Builds a prefix from sorted nonzero terms, cutting at `validity` and at the
/// term budget.
fn finish(
    mut terms: Vec<Term>,
    bound: GroupElement,
    validity: Option<GroupElement>,
    term_bound: usize,
) -> Prefix {
    let mut exact_through = validity.filter(|v| *v < bound);
    if let Some(v) = &exact_through {
        let keep = terms.partition_point(|(g, _)| g <= v);
        terms.truncate(keep);
    }
    if terms.len() > term_bound {
        terms.truncate(term_bound);
        let last = terms.last().map(|(g, _)| g.clone()).expect("term_bound >= 1");
        exact_through = Some(match exact_through {
            Some(v) if v < last => v,
            _ => last,
        });
    }
    Prefix { terms, bound, exact_through }
}

fn min_of(a: GroupElement, b: GroupElement) -> GroupElement {
    if a <= b {
        a
    } else {
        b
    }
}

/// Evaluation context with a per-node memo of the longest prefix computed so
/// far. A context is single-threaded; clone it to evaluate in parallel.
#[derive(Debug, Clone)]
pub struct Evaluator {
    domain: Domain,
    horizon: Horizon,
    memo: HashMap<u64, Arc<Prefix>>,
    floors: HashMap<u64, Option<GroupElement>>,
    leads: HashMap<u64, (GroupElement, FieldElement)>,
}

impl Evaluator {
    pub fn new(domain: Domain, horizon: Horizon) -> Result<Self, SeriesError> {
        domain.check_exponent(&horizon.exp_bound)?;
        if horizon.term_bound == 0 {
            return Err(SeriesError::ZeroTermBound);
        }
        Ok(Evaluator { domain, horizon, memo: HashMap::new(), floors: HashMap::new(), leads: HashMap::new() })
    }

    pub fn horizon(&self) -> &Horizon {
        &self.horizon
    }

    fn check(&self, s: &Series) -> Result<(), SeriesError> {
        if s.domain() == self.domain {
            Ok(())
        } else {
            Err(SeriesError::DomainMismatch(self.domain, s.domain()))
        }
    }

    fn budget_error(&self) -> SeriesError {
        SeriesError::TermBudgetExceeded { term_bound: self.horizon.term_bound }
    }

    /// Expansion of `s` up to the horizon's exponent bound.
    pub fn term_list(&mut self, s: &Series) -> Result<TermList, SeriesError> {
        let bound = self.horizon.exp_bound.clone();
        self.term_list_at(s, &bound)
    }

    pub fn term_list_at(&mut self, s: &Series, bound: &GroupElement) -> Result<TermList, SeriesError> {
        self.check(s)?;
        self.domain.check_exponent(bound)?;
        let p = self.eval(s, bound)?;
        let completeness = match &p.exact_through {
            None => Completeness::CompleteUpToBound,
            Some(_) if p.terms.is_empty() => return Err(self.budget_error()),
            Some(x) => Completeness::TruncatedByTermBound { exact_through: x.clone() },
        };
        Ok(TermList { terms: p.terms.clone(), completeness, exp_bound: bound.clone() })
    }

    pub fn vmin(&mut self, s: &Series) -> Result<GroupElement, SeriesError> {
        self.check(s)?;
        let bound = self.horizon.exp_bound.clone();
        let p = self.eval(s, &bound)?;
        match (p.first_exponent(), &p.exact_through) {
            (Some(g), _) => Ok(g.clone()),
            (None, None) => Err(SeriesError::ZeroUpToHorizon { bound }),
            (None, Some(_)) => Err(self.budget_error()),
        }
    }

    pub fn coefficient_at(&mut self, s: &Series, g: &GroupElement) -> Result<FieldElement, SeriesError> {
        self.check(s)?;
        self.domain.check_exponent(g)?;
        let p = self.eval(s, g)?;
        if p.exact_through.is_some() {
            return Err(self.budget_error());
        }
        Ok(p.terms
            .last()
            .filter(|(e, _)| e == g)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.domain.field.zero()))
    }

    fn eval(&mut self, s: &Series, bound: &GroupElement) -> Result<Arc<Prefix>, SeriesError> {
        if let Some(cached) = self.memo.get(&s.id()) {
            if &cached.bound == bound {
                return Ok(cached.clone());
            }
            if &cached.bound > bound {
                return Ok(Arc::new(cached.restrict(bound)));
            }
        }
        let prefix = Arc::new(self.compute(s, bound)?);
        self.memo.insert(s.id(), prefix.clone());
        Ok(prefix)
    }

    fn compute(&mut self, s: &Series, bound: &GroupElement) -> Result<Prefix, SeriesError> {
        let term_bound = self.horizon.term_bound;
        match s.kind() {
            NodeKind::Monomial(c, g) => {
                let terms =
                    if !c.is_zero() && g <= bound { vec![(g.clone(), c.clone())] } else { Vec::new() };
                Ok(finish(terms, bound.clone(), None, term_bound))
            }
            NodeKind::Literal(terms) => {
                let keep = terms.partition_point(|(g, _)| g <= bound);
                Ok(finish(terms[..keep].to_vec(), bound.clone(), None, term_bound))
            }
            NodeKind::Neg(child) => {
                let p = self.eval(child, bound)?;
                Ok(Prefix {
                    terms: p.terms.iter().map(|(g, c)| (g.clone(), c.negated())).collect(),
                    bound: bound.clone(),
                    exact_through: p.exact_through.clone(),
                })
            }
            NodeKind::Sum(a, b) => {
                let pa = self.eval(a, bound)?;
                let pb = self.eval(b, bound)?;
                let validity = min_of(pa.limit().clone(), pb.limit().clone());
                let mut acc: BTreeMap<GroupElement, FieldElement> = BTreeMap::new();
                for (g, c) in pa.terms.iter().chain(pb.terms.iter()) {
                    match acc.get_mut(g) {
                        Some(x) => *x = &*x + c,
                        None => {
                            acc.insert(g.clone(), c.clone());
                        }
                    }
                }
                let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                Ok(finish(terms, bound.clone(), Some(validity), term_bound))
            }
            NodeKind::Product(a, b) => self.product(a, b, bound),
            NodeKind::Truncate { child, at, inclusive } => {
                let eff = min_of(bound.clone(), at.clone());
                let p = self.eval(child, &eff)?;
                let terms = p
                    .terms
                    .iter()
                    .filter(|(g, _)| if *inclusive { g <= at } else { g < at })
                    .cloned()
                    .collect();
                Ok(finish(terms, bound.clone(), p.exact_through.clone(), term_bound))
            }
            NodeKind::GeometricTail(base) => {
                let pb = self.eval(base, bound)?;
                if let Some(v) = pb.first_exponent() {
                    if !v.is_positive() {
                        return Err(SeriesError::NonPositiveValuation { vmin: v.clone() });
                    }
                }
                let (terms, validity) = self.geometric(&pb.terms, pb.limit(), bound);
                Ok(finish(terms, bound.clone(), Some(validity), term_bound))
            }
            NodeKind::Inverse { child, witness } => self.inverse(s, child, witness.as_ref(), bound),
        }
    }

    fn product(&mut self, a: &Series, b: &Series, bound: &GroupElement) -> Result<Prefix, SeriesError> {
        let (Some(fa), Some(fb)) = (self.floor(a)?, self.floor(b)?) else {
            return Ok(Prefix::empty(bound.clone()));
        };
        let pa = self.eval(a, &(bound - &fb))?;
        let pb = self.eval(b, &(bound - &fa))?;
        // c_g needs a through g - vmin(b) and b through g - vmin(a)
        let va = pa.first_exponent().cloned().unwrap_or(fa);
        let vb = pb.first_exponent().cloned().unwrap_or(fb);
        let validity = min_of(min_of(pa.limit() + &vb, pb.limit() + &va), bound.clone());
        let mut acc: BTreeMap<GroupElement, FieldElement> = BTreeMap::new();
        for (ga, ca) in &pa.terms {
            if ga + &vb > validity {
                break;
            }
            for (gb, cb) in &pb.terms {
                let g = ga + gb;
                if g > validity {
                    break;
                }
                let c = ca * cb;
                match acc.get_mut(&g) {
                    Some(x) => *x = &*x + &c,
                    None => {
                        acc.insert(g, c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(finish(terms, bound.clone(), Some(validity), self.horizon.term_bound))
    }

    /// `sum_n eps^n` from a prefix of `eps` (support in `G^{>0}`), via the
    /// recurrence `c = 1 + eps * c`. Returns the terms and the exponent up to
    /// which they are exact.
    fn geometric(
        &self,
        eps: &[Term],
        eps_limit: &GroupElement,
        bound: &GroupElement,
    ) -> (Vec<Term>, GroupElement) {
        let limit = min_of(bound.clone(), eps_limit.clone());
        let zero = self.domain.group.zero();
        if limit < zero {
            return (Vec::new(), limit);
        }
        let gens: Vec<GroupElement> = eps.iter().map(|(g, _)| g.clone()).collect();
        let (candidates, complete) = enumerate_finite_sums(&gens, &limit, self.horizon.term_bound);
        let validity = if complete { limit } else { candidates.last().cloned().expect("term_bound >= 1") };
        let mut coeffs: HashMap<GroupElement, FieldElement> = HashMap::new();
        let mut terms = Vec::new();
        for x in candidates {
            let c = if x.is_zero() {
                self.domain.field.one()
            } else {
                let mut acc = self.domain.field.zero();
                for (e, ce) in eps.iter().take_while(|(e, _)| *e <= x) {
                    if let Some(prev) = coeffs.get(&(&x - e)) {
                        acc = &acc + &(ce * prev);
                    }
                }
                acc
            };
            if !c.is_zero() {
                coeffs.insert(x.clone(), c.clone());
                terms.push((x, c));
            }
        }
        (terms, validity)
    }

    fn inverse(
        &mut self,
        node: &Series,
        child: &Series,
        witness: Option<&GroupElement>,
        bound: &GroupElement,
    ) -> Result<Prefix, SeriesError> {
        let (g0, lead) = self.lead_of(node, child, witness, bound)?;
        let lead_inv = lead.inv()?;
        let neg_lead_inv = lead_inv.negated();
        // (b^-1)_g = lead^-1 * (sum eps^n)_(g + g0); eps_h = -lead^-1 b_(h + g0)
        let shifted_bound = bound + &g0;
        let pb = self.eval(child, &(&shifted_bound + &g0))?;
        let eps: Vec<Term> =
            pb.terms.iter().filter(|(g, _)| g > &g0).map(|(g, c)| (g - &g0, &neg_lead_inv * c)).collect();
        let eps_limit = pb.limit() - &g0;
        let (tail, validity) = self.geometric(&eps, &eps_limit, &shifted_bound);
        let terms = tail.into_iter().map(|(g, c)| (&g - &g0, &lead_inv * &c)).collect();
        Ok(finish(terms, bound.clone(), Some(&validity - &g0), self.horizon.term_bound))
    }

    fn lead_of(
        &mut self,
        node: &Series,
        child: &Series,
        witness: Option<&GroupElement>,
        bound: &GroupElement,
    ) -> Result<(GroupElement, FieldElement), SeriesError> {
        if let Some(found) = self.leads.get(&node.id()) {
            return Ok(found.clone());
        }
        let found = self.leading_term(child, witness, bound)?;
        self.leads.insert(node.id(), found.clone());
        Ok(found)
    }

    /// Least support exponent of `b` and its coefficient. With a witness the
    /// search stops at the witness; otherwise it runs up to the larger of
    /// `bound` and the horizon's exponent bound.
    pub(crate) fn leading_term(
        &mut self,
        b: &Series,
        witness: Option<&GroupElement>,
        bound: &GroupElement,
    ) -> Result<(GroupElement, FieldElement), SeriesError> {
        self.check(b)?;
        if let Some(w) = witness {
            let p = self.eval(b, w)?;
            return match p.terms.first() {
                Some((g, _)) if g < w => Err(SeriesError::InvalidWitness {
                    witness: w.clone(),
                    reason: "the series has support below the witness",
                }),
                Some((g, c)) if g == w => Ok((g.clone(), c.clone())),
                _ if p.exact_through.is_some() => Err(self.budget_error()),
                _ => Err(SeriesError::InvalidWitness {
                    witness: w.clone(),
                    reason: "the coefficient at the witness is zero",
                }),
            };
        }
        let search =
            if bound > &self.horizon.exp_bound { bound.clone() } else { self.horizon.exp_bound.clone() };
        let p = self.eval(b, &search)?;
        match (p.terms.first(), &p.exact_through) {
            (Some((g, c)), _) => Ok((g.clone(), c.clone())),
            (None, None) => Err(SeriesError::ZeroUpToHorizon { bound: search }),
            (None, Some(_)) => Err(self.budget_error()),
        }
    }

    /// A lower bound for the support of `s`; `None` when `s` is zero by
    /// construction.
    fn floor(&mut self, s: &Series) -> Result<Option<GroupElement>, SeriesError> {
        if let Some(f) = self.floors.get(&s.id()) {
            return Ok(f.clone());
        }
        let f = match s.kind() {
            NodeKind::Monomial(c, g) => (!c.is_zero()).then(|| g.clone()),
            NodeKind::Literal(terms) => terms.first().map(|(g, _)| g.clone()),
            NodeKind::Neg(child) => self.floor(child)?,
            NodeKind::Sum(a, b) => match (self.floor(a)?, self.floor(b)?) {
                (Some(x), Some(y)) => Some(min_of(x, y)),
                (x, None) => x,
                (None, y) => y,
            },
            NodeKind::Product(a, b) => match (self.floor(a)?, self.floor(b)?) {
                (Some(x), Some(y)) => Some(&x + &y),
                _ => None,
            },
            NodeKind::GeometricTail(_) => Some(self.domain.group.zero()),
            NodeKind::Truncate { child, at, inclusive } => {
                self.floor(child)?.filter(|f| if *inclusive { f <= at } else { f < at })
            }
            NodeKind::Inverse { child, witness } => {
                let bound = self.horizon.exp_bound.clone();
                let (g0, _) = self.lead_of(s, child, witness.as_ref(), &bound)?;
                Some(g0.negated())
            }
        };
        self.floors.insert(s.id(), f.clone());
        Ok(f)
    }
}
