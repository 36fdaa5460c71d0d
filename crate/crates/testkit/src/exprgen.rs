//! Random expressions in the `hahn` grammar, paired with an oracle
//! evaluation that does not go through the parser or the series engine.

use rand::Rng;

use crate::oracle::{Coef, Dense};

/// Expression tree over integer exponents.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// `c * t^(k)`
    Mono(i64, i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Inv(Box<Expr>),
    /// Terms with exponent strictly below the bound.
    Trunc(Box<Expr>, i64),
}

/// Limits for [`random_expr`].
#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub max_depth: u32,
    pub max_exponent: i64,
    pub max_coefficient: i64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_depth: 3, max_exponent: 40, max_coefficient: 3 }
    }
}

pub fn random_expr<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Expr {
    gen(rng, cfg, cfg.max_depth)
}

fn leaf<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Expr {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-cfg.max_coefficient..=cfg.max_coefficient);
    }
    // small exponents are more interesting for products and inverses
    let k = if rng.gen_bool(0.5) {
        rng.gen_range(0..=cfg.max_exponent.min(4))
    } else {
        rng.gen_range(0..=cfg.max_exponent)
    };
    Expr::Mono(c, k)
}

fn gen<R: Rng>(rng: &mut R, cfg: &GenConfig, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return leaf(rng, cfg);
    }
    let sub = |rng: &mut R| Box::new(gen(rng, cfg, depth - 1));
    match rng.gen_range(0..10) {
        0..=2 => Expr::Add(sub(rng), sub(rng)),
        3 => Expr::Sub(sub(rng), sub(rng)),
        4..=6 => Expr::Mul(sub(rng), sub(rng)),
        7 | 8 => Expr::Inv(sub(rng)),
        _ => Expr::Trunc(sub(rng), rng.gen_range(0..=cfg.max_exponent)),
    }
}

impl Expr {
    /// Source text in the `hahn` expression grammar.
    pub fn to_text(&self) -> String {
        match self {
            Expr::Mono(c, 0) => format!("{c}"),
            Expr::Mono(c, k) => format!("{c}*t^({k})"),
            Expr::Add(a, b) => format!("({} + {})", a.to_text(), b.to_text()),
            Expr::Sub(a, b) => format!("({} - {})", a.to_text(), b.to_text()),
            Expr::Mul(a, b) => format!("({})*({})", a.to_text(), b.to_text()),
            Expr::Inv(a) => format!("inv({})", a.to_text()),
            Expr::Trunc(a, k) => format!("trunc({}, {k})", a.to_text()),
        }
    }

    /// A lower bound for the valuation, exact for inverses. `None` when an
    /// inverse has no nonzero term up to `search`.
    fn lower(&self, zero: &impl Coef, search: i64) -> Option<i64> {
        Some(match self {
            Expr::Mono(_, k) => *k,
            Expr::Add(a, b) | Expr::Sub(a, b) => a.lower(zero, search)?.min(b.lower(zero, search)?),
            Expr::Mul(a, b) => a.lower(zero, search)? + b.lower(zero, search)?,
            Expr::Inv(a) => -a.valuation(zero, search)?,
            Expr::Trunc(a, _) => a.lower(zero, search)?,
        })
    }

    fn valuation<C: Coef>(&self, zero: &C, search: i64) -> Option<i64> {
        self.expand(zero, search, search)?.terms(search).first().map(|(e, _)| *e)
    }

    /// Expansion exact for every exponent `<= bound`. Inverses look for the
    /// leading term of their argument up to `bound` only, so `None` means
    /// that some inverse's argument vanishes up to `bound`.
    pub fn eval<C: Coef>(&self, zero: &C, bound: i64) -> Option<Dense<C>> {
        self.expand(zero, bound, bound)
    }

    fn expand<C: Coef>(&self, zero: &C, bound: i64, search: i64) -> Option<Dense<C>> {
        Some(match self {
            Expr::Mono(c, k) => {
                let mut d = Dense::zero(zero.clone(), *k, bound.max(*k));
                d.coeffs[0] = zero.of_int(*c);
                d
            }
            Expr::Add(a, b) => a.expand(zero, bound, search)?.add(&b.expand(zero, bound, search)?),
            Expr::Sub(a, b) => a.expand(zero, bound, search)?.add(&b.expand(zero, bound, search)?.neg()),
            Expr::Mul(a, b) => {
                let (la, lb) = (a.lower(zero, search)?, b.lower(zero, search)?);
                a.expand(zero, bound - lb, search)?.mul(&b.expand(zero, bound - la, search)?)
            }
            Expr::Inv(a) => {
                let v = a.valuation(zero, search)?;
                a.expand(zero, (bound + 2 * v).max(v), search)?.inverse()
            }
            Expr::Trunc(a, k) => {
                let la = a.lower(zero, search)?;
                let inner = (*k - 1).min(bound);
                if inner < la {
                    Dense::zero(zero.clone(), la, bound.max(la))
                } else {
                    a.expand(zero, inner, search)?.truncate(*k).extended(bound)
                }
            }
        })
    }
}
