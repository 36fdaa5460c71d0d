//! Text and JSON forms of expansions, plus an expression-style `Display` for
//! series DAGs.
//!
//! The canonical text form lists terms in increasing exponent order:
//! `1 - 1*t^(1) + 2/3*t^(5/2)`. Coefficients are always written, exponents are
//! always parenthesised, and the exponent-zero term is the bare coefficient.
//! Rational-function coefficients are wrapped in braces, e.g. `{1/x}*t^(2)`.

use std::fmt;

use serde_json::{json, Value};

use super::{Completeness, NodeKind, Series, Term, TermList};
use crate::coefficients::FieldElement;
use crate::exponents::GroupElement;

fn coefficient_text(c: &FieldElement) -> String {
    match c {
        FieldElement::RatFn(_) => format!("{{{c}}}"),
        _ => c.to_string(),
    }
}

fn term_text(g: &GroupElement, c: &FieldElement) -> String {
    if g.is_zero() {
        coefficient_text(c)
    } else {
        format!("{}*t^({g})", coefficient_text(c))
    }
}

/// Canonical text of a list of terms; `0` when empty.
pub fn render_terms(terms: &[Term]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (g, c)) in terms.iter().enumerate() {
        let negative = c.is_negative_rational();
        let shown = if negative { c.negated() } else { c.clone() };
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&term_text(g, &shown));
    }
    out
}

impl TermList {
    /// `{"terms":[{"exp":..,"coef":..}],"complete":..}`, with `exact_through`
    /// added when the budget cut the expansion short.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> =
            self.terms.iter().map(|(g, c)| json!({"exp": g.to_string(), "coef": c.to_string()})).collect();
        let mut v = json!({"terms": terms, "complete": self.is_complete()});
        if let Completeness::TruncatedByTermBound { exact_through } = &self.completeness {
            v["exact_through"] = Value::String(exact_through.to_string());
        }
        v
    }
}

impl fmt::Display for TermList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(&self.terms))
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            NodeKind::Monomial(c, g) => write!(f, "{}", render_terms(&[(g.clone(), c.clone())])),
            NodeKind::Literal(terms) => write!(f, "({})", render_terms(terms)),
            NodeKind::Sum(a, b) => write!(f, "({a} + {b})"),
            NodeKind::Neg(a) => write!(f, "-({a})"),
            NodeKind::Product(a, b) => write!(f, "({a})*({b})"),
            NodeKind::Inverse { child, witness: None } => write!(f, "inv({child})"),
            NodeKind::Inverse { child, witness: Some(w) } => write!(f, "inv({child}; g0={w})"),
            NodeKind::GeometricTail(base) => write!(f, "geom({base})"),
            NodeKind::Truncate { child, at, inclusive: false } => write!(f, "trunc({child}, {at})"),
            NodeKind::Truncate { child, at, inclusive: true } => write!(f, "trunc_le({child}, {at})"),
        }
    }
}
