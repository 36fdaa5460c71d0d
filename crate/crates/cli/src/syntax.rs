//! Expression syntax: lexer, recursive-descent parser and printer.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary ('*' unary)*
//! unary    := '-' unary | factor
//! factor   := NUMBER ('/' NUMBER)?
//!           | 'x'
//!           | '{' field '}'
//!           | 't' '^' '(' exponent ')'
//!           | 'inv' '(' expr (';' 'g0' '=' exponent)? ')'
//!           | ('trunc' | 'trunc_le') '(' expr ',' exponent ')'
//!           | '(' expr ')'
//! exponent := '-'? NUMBER ('/' NUMBER)? | '(' '-'? NUMBER (',' '-'? NUMBER)* ')'
//! field    := polynomial arithmetic in x with + - * / ^ and parentheses
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Number(BigInt),
    Ident(String),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Number(n) => write!(f, "number {n}"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l, col) = (line, column);
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            Tok::Number(digits.parse().expect("ascii digits"))
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if "+-*/^(){},;=<>".contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(SyntaxError { line: l, column: col, message: format!("unexpected character `{c}`") });
        };
        column += i - start;
        out.push(Token { tok, line: l, column: col });
    }
    out.push(Token { tok: Tok::Eof, line, column });
    Ok(out)
}

/// A parenthesised exponent literal, interpreted later against the group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExponentLit {
    /// `numer/denom` with `denom > 0`; integers have `denom = 1`.
    Ratio(BigInt, BigInt),
    Tuple(Vec<BigInt>),
}

impl fmt::Display for ExponentLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentLit::Ratio(n, d) if d.is_one() => write!(f, "{n}"),
            ExponentLit::Ratio(n, d) => write!(f, "{n}/{d}"),
            ExponentLit::Tuple(v) => {
                let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

/// Arithmetic on coefficients of `F_p(x)` written inside braces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldExpr {
    Int(BigInt),
    X,
    Neg(Box<FieldExpr>),
    Add(Box<FieldExpr>, Box<FieldExpr>),
    Sub(Box<FieldExpr>, Box<FieldExpr>),
    Mul(Box<FieldExpr>, Box<FieldExpr>),
    Div(Box<FieldExpr>, Box<FieldExpr>),
    Pow(Box<FieldExpr>, u32),
}

impl fmt::Display for FieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldExpr::Int(n) => write!(f, "{n}"),
            FieldExpr::X => write!(f, "x"),
            FieldExpr::Neg(a) => write!(f, "-({a})"),
            FieldExpr::Add(a, b) => write!(f, "({a}+{b})"),
            FieldExpr::Sub(a, b) => write!(f, "({a}-{b})"),
            FieldExpr::Mul(a, b) => write!(f, "({a})*({b})"),
            FieldExpr::Div(a, b) => write!(f, "({a})/({b})"),
            FieldExpr::Pow(a, k) => write!(f, "({a})^{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// A rational literal `numer/denom`, reduced into the coefficient field.
    Number(BigInt, BigInt),
    /// A braced coefficient of `F_p(x)`, or the bare variable `x`.
    Field(FieldExpr),
    Monomial(ExponentLit),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Inv {
        child: Box<Expr>,
        witness: Option<ExponentLit>,
    },
    Trunc {
        child: Box<Expr>,
        at: ExponentLit,
        inclusive: bool,
    },
}

impl Expr {
    /// Whether some `inv` lacks a `g0` witness.
    pub fn has_unwitnessed_inverse(&self) -> bool {
        match self {
            Expr::Number(..) | Expr::Field(_) | Expr::Monomial(_) => false,
            Expr::Neg(a) => a.has_unwitnessed_inverse(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.has_unwitnessed_inverse() || b.has_unwitnessed_inverse()
            }
            Expr::Inv { child, witness } => witness.is_none() || child.has_unwitnessed_inverse(),
            Expr::Trunc { child, .. } => child.has_unwitnessed_inverse(),
        }
    }
}

/// Prints in a fully parenthesised form that parses back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(n, d) if d.is_one() => write!(f, "{n}"),
            Expr::Number(n, d) => write!(f, "{n}/{d}"),
            Expr::Field(FieldExpr::X) => write!(f, "x"),
            Expr::Field(e) => write!(f, "{{{e}}}"),
            Expr::Monomial(e) => write!(f, "t^({e})"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Inv { child, witness: None } => write!(f, "inv({child})"),
            Expr::Inv { child, witness: Some(w) } => write!(f, "inv({child}; g0={w})"),
            Expr::Trunc { child, at, inclusive: false } => write!(f, "trunc({child}, {at})"),
            Expr::Trunc { child, at, inclusive: true } => write!(f, "trunc_le({child}, {at})"),
        }
    }
}

/// Token cursor shared by the expression and descriptor parsers.
pub struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self, SyntaxError> {
        Ok(Cursor { tokens: tokenize(src)?, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)].tok
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, message: impl Into<String>) -> SyntaxError {
        let t = &self.tokens[self.pos];
        SyntaxError { line: t.line, column: t.column, message: message.into() }
    }

    pub fn unexpected(&self, wanted: &str) -> SyntaxError {
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    pub fn expect_ident(&mut self, name: &str) -> Result<(), SyntaxError> {
        if self.peek() == &Tok::Ident(name.to_string()) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{name}`")))
        }
    }

    pub fn expect_end(&self) -> Result<(), SyntaxError> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    pub fn number(&mut self) -> Result<BigInt, SyntaxError> {
        match self.peek().clone() {
            Tok::Number(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    pub fn signed_number(&mut self) -> Result<BigInt, SyntaxError> {
        let neg = self.eat('-');
        let n = self.number()?;
        Ok(if neg { -n } else { n })
    }

    /// `numer/denom` after the numerator has been read.
    fn ratio_tail(&mut self, numer: BigInt) -> Result<(BigInt, BigInt), SyntaxError> {
        if !self.eat('/') {
            return Ok((numer, BigInt::one()));
        }
        let denom = self.number()?;
        if denom.is_zero() {
            return Err(self.error("zero denominator"));
        }
        Ok((numer, denom))
    }

    /// An exponent literal without surrounding parentheses: `3`, `-1/2` or a
    /// tuple `(1,-2)`.
    pub fn exponent(&mut self) -> Result<ExponentLit, SyntaxError> {
        if self.eat('(') {
            let mut coords = vec![self.signed_number()?];
            while self.eat(',') {
                coords.push(self.signed_number()?);
            }
            self.expect(')')?;
            return Ok(ExponentLit::Tuple(coords));
        }
        let n = self.signed_number()?;
        let (n, d) = self.ratio_tail(n)?;
        Ok(ExponentLit::Ratio(n, d))
    }
}

pub fn parse_expression(src: &str) -> Result<Expr, SyntaxError> {
    let mut c = Cursor::new(src)?;
    let e = expr(&mut c)?;
    c.expect_end()?;
    Ok(e)
}

/// Parses a standalone exponent such as `5/2`, `-3` or `(1,-2)`.
pub fn parse_exponent(src: &str) -> Result<ExponentLit, SyntaxError> {
    let mut c = Cursor::new(src)?;
    let e = c.exponent()?;
    c.expect_end()?;
    Ok(e)
}

fn expr(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    let mut lhs = term(c)?;
    loop {
        if c.eat('+') {
            lhs = Expr::Add(Box::new(lhs), Box::new(term(c)?));
        } else if c.eat('-') {
            lhs = Expr::Sub(Box::new(lhs), Box::new(term(c)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn term(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    let mut lhs = unary(c)?;
    while c.eat('*') {
        lhs = Expr::Mul(Box::new(lhs), Box::new(unary(c)?));
    }
    Ok(lhs)
}

fn unary(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    if c.eat('-') {
        return Ok(Expr::Neg(Box::new(unary(c)?)));
    }
    factor(c)
}

fn factor(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    match c.peek().clone() {
        Tok::Number(n) => {
            c.bump();
            let (n, d) = c.ratio_tail(n)?;
            Ok(Expr::Number(n, d))
        }
        Tok::Sym('(') => {
            c.bump();
            let e = expr(c)?;
            c.expect(')')?;
            Ok(e)
        }
        Tok::Sym('{') => {
            c.bump();
            let e = field_expr(c)?;
            c.expect('}')?;
            Ok(Expr::Field(e))
        }
        Tok::Ident(name) => match name.as_str() {
            "x" => {
                c.bump();
                Ok(Expr::Field(FieldExpr::X))
            }
            "t" => {
                c.bump();
                c.expect('^')?;
                c.expect('(')?;
                let e = c.exponent()?;
                c.expect(')')?;
                Ok(Expr::Monomial(e))
            }
            "inv" => {
                c.bump();
                c.expect('(')?;
                let child = Box::new(expr(c)?);
                let witness = if c.eat(';') {
                    c.expect_ident("g0")?;
                    c.expect('=')?;
                    Some(c.exponent()?)
                } else {
                    None
                };
                c.expect(')')?;
                Ok(Expr::Inv { child, witness })
            }
            "trunc" | "trunc_le" => {
                c.bump();
                c.expect('(')?;
                let child = Box::new(expr(c)?);
                c.expect(',')?;
                let at = c.exponent()?;
                c.expect(')')?;
                Ok(Expr::Trunc { child, at, inclusive: name == "trunc_le" })
            }
            _ => Err(c.error(format!("unknown name `{name}`"))),
        },
        _ => Err(c.unexpected("a number, `t^(..)`, `inv`, `trunc` or `(`")),
    }
}

fn field_expr(c: &mut Cursor) -> Result<FieldExpr, SyntaxError> {
    let mut lhs = field_term(c)?;
    loop {
        if c.eat('+') {
            lhs = FieldExpr::Add(Box::new(lhs), Box::new(field_term(c)?));
        } else if c.eat('-') {
            lhs = FieldExpr::Sub(Box::new(lhs), Box::new(field_term(c)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn field_term(c: &mut Cursor) -> Result<FieldExpr, SyntaxError> {
    let mut lhs = field_unary(c)?;
    loop {
        if c.eat('*') {
            lhs = FieldExpr::Mul(Box::new(lhs), Box::new(field_unary(c)?));
        } else if c.eat('/') {
            lhs = FieldExpr::Div(Box::new(lhs), Box::new(field_unary(c)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn field_unary(c: &mut Cursor) -> Result<FieldExpr, SyntaxError> {
    if c.eat('-') {
        return Ok(FieldExpr::Neg(Box::new(field_unary(c)?)));
    }
    let base = match c.peek().clone() {
        Tok::Number(n) => {
            c.bump();
            FieldExpr::Int(n)
        }
        Tok::Ident(s) if s == "x" => {
            c.bump();
            FieldExpr::X
        }
        Tok::Sym('(') => {
            c.bump();
            let e = field_expr(c)?;
            c.expect(')')?;
            e
        }
        _ => return Err(c.unexpected("a number, `x` or `(` in a field literal")),
    };
    if c.eat('^') {
        let k = c.number()?;
        let k: u32 = k.try_into().ok().filter(|k| *k <= 10_000).ok_or_else(|| c.error("power too large"))?;
        return Ok(FieldExpr::Pow(Box::new(base), k));
    }
    Ok(base)
}
