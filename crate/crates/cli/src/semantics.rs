//! Interpretation of parsed expressions and literals in a session's group and
//! coefficient field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use hahn_core::coefficients::{FieldDescriptor, FieldElement, FieldError};
use hahn_core::exponents::{GroupDescriptor, GroupElement};
use hahn_core::series::{Domain, Series, SeriesError};

use crate::syntax::{parse_exponent, ExponentLit, Expr, FieldExpr, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("exponent {0} is not an element of {1}")]
    NotInGroup(String, GroupDescriptor),
    #[error("`x` is only available over F_p(x), not over {0}")]
    NoVariable(FieldDescriptor),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("unknown group `{0}` (expected Z, Q, Z^n or trivial)")]
    UnknownGroup(String),
    #[error("unknown field `{0}` (expected Q, Fp or Fp(x) for a prime p)")]
    UnknownField(String),
}

pub fn parse_group(s: &str) -> Result<GroupDescriptor, SemanticError> {
    let t = s.trim();
    match t {
        "Z" => return Ok(GroupDescriptor::Integers),
        "Q" => return Ok(GroupDescriptor::Rationals),
        "trivial" | "0" => return Ok(GroupDescriptor::Trivial),
        _ => {}
    }
    t.strip_prefix("Z^")
        .and_then(|n| n.parse::<usize>().ok())
        .and_then(|n| GroupDescriptor::lex(n).ok())
        .ok_or_else(|| SemanticError::UnknownGroup(s.to_string()))
}

pub fn parse_field(s: &str) -> Result<FieldDescriptor, SemanticError> {
    let t = s.trim();
    if t == "Q" {
        return Ok(FieldDescriptor::Rationals);
    }
    let unknown = || SemanticError::UnknownField(s.to_string());
    let body = t.strip_prefix('F').ok_or_else(unknown)?;
    let body = body.strip_prefix('_').unwrap_or(body);
    let (digits, function_field) = match body.strip_suffix("(x)") {
        Some(d) => (d, true),
        None => (body, false),
    };
    let p: u64 = digits.parse().map_err(|_| unknown())?;
    let made =
        if function_field { FieldDescriptor::rational_functions(p) } else { FieldDescriptor::prime_field(p) };
    made.map_err(|_| unknown())
}

/// Interprets an exponent literal in `group`.
pub fn exponent_in(lit: &ExponentLit, group: GroupDescriptor) -> Result<GroupElement, SemanticError> {
    let bad = || SemanticError::NotInGroup(lit.to_string(), group);
    match (lit, group) {
        (ExponentLit::Ratio(n, d), GroupDescriptor::Integers) if d.is_one() => {
            Ok(GroupElement::Int(n.clone()))
        }
        (ExponentLit::Ratio(n, d), GroupDescriptor::Rationals) => {
            Ok(GroupElement::Rat(BigRational::new(n.clone(), d.clone())))
        }
        (ExponentLit::Ratio(n, d), GroupDescriptor::Trivial) if n.is_zero() && d.is_one() => {
            Ok(GroupElement::Trivial)
        }
        (ExponentLit::Tuple(v), GroupDescriptor::Lex(k)) if v.len() == k => Ok(GroupElement::Lex(v.clone())),
        (ExponentLit::Tuple(v), GroupDescriptor::Trivial) if v.iter().all(Zero::is_zero) => {
            Ok(GroupElement::Trivial)
        }
        _ => Err(bad()),
    }
}

/// Parses a standalone exponent such as a command-line bound.
pub fn parse_exponent_in(src: &str, group: GroupDescriptor) -> Result<GroupElement, SemanticError> {
    exponent_in(&parse_exponent(src)?, group)
}

fn field_value(e: &FieldExpr, field: FieldDescriptor) -> Result<FieldElement, SemanticError> {
    Ok(match e {
        FieldExpr::Int(n) => field.from_ratio(n, &BigInt::one())?,
        FieldExpr::X => field.variable().ok_or(SemanticError::NoVariable(field))?,
        FieldExpr::Neg(a) => field_value(a, field)?.negated(),
        FieldExpr::Add(a, b) => field_value(a, field)?.checked_add(&field_value(b, field)?)?,
        FieldExpr::Sub(a, b) => field_value(a, field)?.checked_add(&field_value(b, field)?.negated())?,
        FieldExpr::Mul(a, b) => field_value(a, field)?.checked_mul(&field_value(b, field)?)?,
        FieldExpr::Div(a, b) => field_value(a, field)?.checked_mul(&field_value(b, field)?.inv()?)?,
        FieldExpr::Pow(a, k) => {
            let base = field_value(a, field)?;
            let mut acc = field.one();
            for _ in 0..*k {
                acc = acc.checked_mul(&base)?;
            }
            acc
        }
    })
}

/// Builds the lazy series for an expression.
pub fn build_series(e: &Expr, domain: Domain) -> Result<Series, SemanticError> {
    let field = domain.field;
    Ok(match e {
        Expr::Number(n, d) => Series::constant(domain, field.from_ratio(n, d)?)?,
        Expr::Field(fe) => Series::constant(domain, field_value(fe, field)?)?,
        Expr::Monomial(lit) => Series::t_pow(domain, exponent_in(lit, domain.group)?)?,
        Expr::Neg(a) => build_series(a, domain)?.neg(),
        Expr::Add(a, b) => build_series(a, domain)?.try_add(&build_series(b, domain)?)?,
        Expr::Sub(a, b) => build_series(a, domain)?.try_sub(&build_series(b, domain)?)?,
        Expr::Mul(a, b) => build_series(a, domain)?.try_mul(&build_series(b, domain)?)?,
        Expr::Inv { child, witness } => {
            let w = witness.as_ref().map(|w| exponent_in(w, domain.group)).transpose()?;
            build_series(child, domain)?.inverse(w)?
        }
        Expr::Trunc { child, at, inclusive } => {
            let s = build_series(child, domain)?;
            let g = exponent_in(at, domain.group)?;
            if *inclusive {
                s.truncate_inclusive(&g)?
            } else {
                s.truncate(&g)?
            }
        }
    })
}
