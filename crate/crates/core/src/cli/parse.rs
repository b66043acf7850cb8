//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' nat)?
//! atom   := rational | var | '(' expr ')'
//! rational := int ('/' int)?
//! ```
//!
//! Implicit multiplication and floating literals are rejected. The canonical
//! rendering of [`Poly`] parses back to the same polynomial.

use crate::linalg::ExactScalar;
use crate::poly::{Poly, VarContext};
use num_bigint::BigInt;
use num_traits::Zero;
use std::sync::Arc;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("malformed rational at position {pos}")]
    MalformedRational { pos: usize },
    #[error("zero denominator at position {pos}")]
    ZeroDenominator { pos: usize },
    #[error("unexpected trailing input at position {pos}")]
    TrailingInput { pos: usize },
    #[error("expected {expected} at position {pos}")]
    Expected { expected: &'static str, pos: usize },
    #[error("exponent at position {pos} is too large")]
    ExponentOverflow { pos: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::UnknownVariable { pos, .. }
            | ParseError::MalformedRational { pos }
            | ParseError::ZeroDenominator { pos }
            | ParseError::TrailingInput { pos }
            | ParseError::Expected { pos, .. }
            | ParseError::ExponentOverflow { pos } => *pos,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Rational(ExactScalar),
    Var { name: String, pos: usize },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn to_poly(&self, ctx: &Arc<VarContext>) -> Result<Poly, ParseError> {
        Ok(match self {
            Expr::Rational(c) => Poly::constant(ctx, c.clone()),
            Expr::Var { name, pos } => {
                let i = ctx.index_of(name).ok_or_else(|| ParseError::UnknownVariable {
                    name: name.clone(),
                    pos: *pos,
                })?;
                Poly::var(ctx, i)
            }
            Expr::Add(a, b) => &a.to_poly(ctx)? + &b.to_poly(ctx)?,
            Expr::Sub(a, b) => &a.to_poly(ctx)? - &b.to_poly(ctx)?,
            Expr::Mul(a, b) => &a.to_poly(ctx)? * &b.to_poly(ctx)?,
            Expr::Neg(a) => -a.to_poly(ctx)?,
            Expr::Pow(a, e) => a.to_poly(ctx)?.pow(*e),
        })
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(b'*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(ParseError::Expected {
                expected: "a literal nonnegative exponent",
                pos: start,
            });
        }
        let e: u32 = digits
            .parse()
            .map_err(|_| ParseError::ExponentOverflow { pos: start })?;
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits")
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let Some(c) = self.peek() else {
            return Err(ParseError::Expected {
                expected: "a number, variable or '('",
                pos: self.pos,
            });
        };
        let start = self.pos;
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            if !self.eat(b')') {
                return Err(ParseError::Expected {
                    expected: "')'",
                    pos: self.pos,
                });
            }
            return Ok(inner);
        }
        if c.is_ascii_digit() {
            let num: BigInt = self.digits().parse().expect("digits parse");
            if self.src.get(self.pos) == Some(&b'.') {
                return Err(ParseError::MalformedRational { pos: start });
            }
            if self.peek() == Some(b'/') {
                self.pos += 1;
                self.skip_ws();
                let den_pos = self.pos;
                let den = self.digits();
                if den.is_empty() {
                    return Err(ParseError::MalformedRational { pos: start });
                }
                let den: BigInt = den.parse().expect("digits parse");
                if den.is_zero() {
                    return Err(ParseError::ZeroDenominator { pos: den_pos });
                }
                return Ok(Expr::Rational(ExactScalar::new(num, den)));
            }
            return Ok(Expr::Rational(ExactScalar::from_integer(num)));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
            return Ok(Expr::Var {
                name: name.to_string(),
                pos: start,
            });
        }
        Err(ParseError::Expected {
            expected: "a number, variable or '('",
            pos: start,
        })
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(ParseError::TrailingInput { pos: p.pos });
    }
    Ok(e)
}

pub fn parse_poly(src: &str, ctx: &Arc<VarContext>) -> Result<Poly, ParseError> {
    parse_expr(src)?.to_poly(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(names: &[&str]) -> Arc<VarContext> {
        VarContext::new(names).unwrap()
    }

    #[test]
    fn parses_simple_expressions() {
        let c = ctx(&["u", "v"]);
        let p = parse_poly("1 + u*v", &c).unwrap();
        assert_eq!(p, &Poly::one(&c) + &(&Poly::var(&c, 0) * &Poly::var(&c, 1)));
        let c3 = ctx(&["x1", "x2", "x3"]);
        let a1 = parse_poly("1 - x1*x2", &c3).unwrap();
        assert_eq!(a1.to_string(), "-x1*x2 + 1");
        assert_eq!(parse_poly("-3/4*u^2 - -v", &c).unwrap().to_string(), "-3/4*u^2 + v");
        assert_eq!(parse_poly("(u + 1)^2", &c).unwrap().to_string(), "u^2 + 2*u + 1");
    }

    #[test]
    fn rejects_parenthesised_exponent() {
        let c = ctx(&["x"]);
        assert_eq!(
            parse_poly("x^(2)", &c).unwrap_err(),
            ParseError::Expected {
                expected: "a literal nonnegative exponent",
                pos: 2
            }
        );
    }

    #[test]
    fn reports_positions() {
        let c = ctx(&["u", "v"]);
        assert_eq!(
            parse_poly("u + w", &c).unwrap_err(),
            ParseError::UnknownVariable {
                name: "w".into(),
                pos: 4
            }
        );
        assert_eq!(
            parse_poly("1/0", &c).unwrap_err(),
            ParseError::ZeroDenominator { pos: 2 }
        );
        assert_eq!(
            parse_poly("1/", &c).unwrap_err(),
            ParseError::MalformedRational { pos: 0 }
        );
        assert_eq!(
            parse_poly("1.5", &c).unwrap_err(),
            ParseError::MalformedRational { pos: 0 }
        );
        assert_eq!(parse_poly("u v", &c).unwrap_err(), ParseError::TrailingInput { pos: 2 });
        assert_eq!(parse_poly("2u", &c).unwrap_err(), ParseError::TrailingInput { pos: 1 });
        assert!(parse_poly("(u", &c).is_err());
        assert!(parse_poly("", &c).is_err());
    }
}
