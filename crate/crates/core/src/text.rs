//! Text syntax for coefficients, polynomials, rational functions and
//! truncated series.
//!
//! Expressions use `+ - * / ^` and parentheses over integer literals, the
//! variable `X` (or `x`) and field generators (`z` for `Q(zeta:k)` and
//! `GF(p^e)`, `t`, `t2`, ... for extensions). A top-level summand `O(X^k)`
//! marks a truncated series. Rendering is canonical: decreasing exponents,
//! `c*X^k` terms, compound coefficients parenthesised.

use thiserror::Error;

use crate::field::{Field, FieldElement};
use crate::poly::{Polynomial, RationalFunction};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

/// A parsed expression: a polynomial, or a genuine quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expression {
    Polynomial(Polynomial),
    Rational(RationalFunction),
}

impl Expression {
    pub fn to_rational(&self) -> RationalFunction {
        match self {
            Expression::Polynomial(p) => RationalFunction::from_polynomial(p.clone()),
            Expression::Rational(r) => r.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(chars[start..i].iter().collect())));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError { position: i, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

#[derive(Clone)]
struct Val {
    num: Polynomial,
    den: Polynomial,
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    field: &'a Field,
    order: Option<u64>,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let position = self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end);
        Err(ParseError { position, message: message.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn constant(&self, c: FieldElement) -> Val {
        Val { num: Polynomial::constant(&c), den: Polynomial::one(self.field) }
    }

    fn expr(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.summand(false)?;
        loop {
            if self.eat('+') {
                let rhs = self.summand(false)?;
                acc = add(&acc, &rhs, false);
            } else if self.eat('-') {
                let rhs = self.summand(true)?;
                acc = add(&acc, &rhs, true);
            } else {
                return Ok(acc);
            }
        }
    }

    /// A term, or an `O(X^k)` marker when at top level.
    fn summand(&mut self, negated: bool) -> Result<Val, ParseError> {
        if self.peek() == Some(&Tok::Ident("O".into())) {
            if self.depth > 0 || negated {
                return self.err("O(X^k) must be a top-level summand");
            }
            self.pos += 1;
            self.expect('(')?;
            match self.peek() {
                Some(Tok::Ident(x)) if x == "X" || x == "x" => self.pos += 1,
                _ => return self.err("expected X inside O(...)"),
            }
            let k = if self.eat('^') { self.integer()? } else { 1 };
            self.expect(')')?;
            self.order = Some(self.order.map_or(k, |o| o.min(k)));
            return Ok(self.constant(self.field.zero()));
        }
        self.term()
    }

    fn term(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = mul(&acc, &rhs);
            } else if self.eat('/') {
                let at = self.pos;
                let rhs = self.unary()?;
                if rhs.num.is_zero() {
                    self.pos = at;
                    return self.err("division by zero");
                }
                acc = mul(&acc, &Val { num: rhs.den, den: rhs.num });
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Val, ParseError> {
        if self.eat('-') {
            let v = self.unary()?;
            return Ok(Val { num: -&v.num, den: v.den });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Val, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.integer()?;
            return Ok(Val { num: base.num.pow(e), den: base.den.pow(e) });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                let v = s.parse::<u64>().or_else(|_| self.err("exponent too large"))?;
                if v > u32::MAX as u64 {
                    return self.err("exponent too large");
                }
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected a nonnegative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Val, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                let n: num_bigint::BigInt = s.parse().expect("digits");
                Ok(self.constant(self.field.from_bigint(&n)))
            }
            Some(Tok::Ident(name)) => {
                if name == "X" || name == "x" {
                    self.pos += 1;
                    return Ok(Val { num: Polynomial::x(self.field), den: Polynomial::one(self.field) });
                }
                match self.field.generator_named(&name) {
                    Some(g) => {
                        self.pos += 1;
                        Ok(self.constant(g))
                    }
                    None => self.err(format!("unknown symbol `{name}` for field {}", self.field)),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                self.depth += 1;
                let v = self.expr()?;
                self.depth -= 1;
                self.expect(')')?;
                Ok(v)
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn add(a: &Val, b: &Val, negate: bool) -> Val {
    let rhs = if negate { -&b.num } else { b.num.clone() };
    if a.den == b.den {
        return Val { num: &a.num + &rhs, den: a.den.clone() };
    }
    Val { num: &(&a.num * &b.den) + &(&rhs * &a.den), den: &a.den * &b.den }
}

fn mul(a: &Val, b: &Val) -> Val {
    Val { num: &a.num * &b.num, den: &a.den * &b.den }
}

fn parse_raw(text: &str, field: &Field) -> Result<(RationalFunction, Option<u64>), ParseError> {
    let toks = tokenize(text)?;
    let end = text.chars().count();
    let mut p = Parser { toks, pos: 0, end, field, order: None, depth: 0 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    let r = RationalFunction::new(v.num, v.den).map_err(|e| ParseError { position: 0, message: e.to_string() })?;
    Ok((r, p.order))
}

fn reject_order(order: Option<u64>) -> Result<(), ParseError> {
    match order {
        Some(_) => Err(ParseError { position: 0, message: "O(X^k) is only allowed in series".into() }),
        None => Ok(()),
    }
}

pub fn parse_expression(text: &str, field: &Field) -> Result<Expression, ParseError> {
    let (r, order) = parse_raw(text, field)?;
    reject_order(order)?;
    Ok(match r.as_polynomial() {
        Some(p) => Expression::Polynomial(p),
        None => Expression::Rational(r),
    })
}

pub fn parse_polynomial(text: &str, field: &Field) -> Result<Polynomial, ParseError> {
    match parse_expression(text, field)? {
        Expression::Polynomial(p) => Ok(p),
        Expression::Rational(_) => Err(ParseError { position: 0, message: "expected a polynomial".into() }),
    }
}

pub fn parse_rational(text: &str, field: &Field) -> Result<RationalFunction, ParseError> {
    parse_expression(text, field).map(|e| e.to_rational())
}

pub fn parse_constant(text: &str, field: &Field) -> Result<FieldElement, ParseError> {
    let p = parse_polynomial(text, field)?;
    if !p.is_constant() {
        return Err(ParseError { position: 0, message: "expected a constant".into() });
    }
    Ok(p.coeff(0))
}

/// Parses a series. A trailing `O(X^k)` gives precision `k - 1`; without
/// one the input is an exact polynomial and `default_precision` (raised to
/// the degree if needed) is used. Quotients are expanded at 0.
pub fn parse_series(text: &str, field: &Field, default_precision: usize) -> Result<TruncatedSeries, ParseError> {
    let (r, order) = parse_raw(text, field)?;
    let to_err = |e: crate::series::SeriesError| ParseError { position: 0, message: e.to_string() };
    match order {
        Some(k) => {
            if k == 0 {
                return Err(ParseError { position: 0, message: "O(X^0) leaves nothing".into() });
            }
            let n = (k - 1) as usize;
            let s = TruncatedSeries::from_rational(&r, n).map_err(to_err)?;
            let cs = s.coefficients();
            TruncatedSeries::new(field, &cs, false).map_err(to_err)
        }
        None => {
            let n = match r.as_polynomial() {
                Some(p) => default_precision.max(p.deg() as usize),
                None => default_precision,
            };
            TruncatedSeries::from_rational(&r, n).map_err(to_err)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_renders() {
        let q = Field::rationals();
        let p = parse_polynomial("x^3 - 3*x", &q).unwrap();
        assert_eq!(p.to_string(), "X^3 - 3*X");
        let p = parse_polynomial("(X+1)^2 - 1/2", &q).unwrap();
        assert_eq!(p.to_string(), "X^2 + 2*X + 1/2");
        let c5 = Field::cyclotomic(5).unwrap();
        let g = parse_polynomial("z*X^3", &c5).unwrap();
        assert_eq!(g.to_string(), "z*X^3");
        let h = parse_polynomial("(z+1)*X^2 - z^4", &c5).unwrap();
        assert_eq!(parse_polynomial(&h.to_string(), &c5).unwrap(), h);
    }

    #[test]
    fn errors_carry_positions() {
        let q = Field::rationals();
        let e = parse_polynomial("X^2 + z", &q).unwrap_err();
        assert_eq!(e.position, 6);
        let e = parse_polynomial("X + ", &q).unwrap_err();
        assert_eq!(e.position, 4);
        assert!(parse_polynomial("X $ 1", &q).is_err());
        assert!(parse_polynomial("1/(X-X)", &q).is_err());
    }

    #[test]
    fn rational_functions() {
        let q = Field::rationals();
        match parse_expression("X^2/(1+2*X)", &q).unwrap() {
            Expression::Rational(r) => assert_eq!(r.to_string(), "(1/2*X^2)/(X + 1/2)"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expression("(X^2-1)/(X-1)", &q).unwrap(), Expression::Polynomial(_)));
    }

    #[test]
    fn series_input() {
        let q = Field::rationals();
        let s = parse_series("X^2 + X^3 + O(X^6)", &q, 32).unwrap();
        assert_eq!(s.precision(), 5);
        assert!(!s.is_exact());
        assert_eq!(s.to_string(), "X^3 + X^2 + O(X^6)");
        let e = parse_series("X^2", &q, 8).unwrap();
        assert!(e.is_exact());
        assert!(parse_series("X^2 - O(X^3)", &q, 8).is_err());
        assert!(parse_polynomial("X + O(X^3)", &q).is_err());
    }
}
