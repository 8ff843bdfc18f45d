//! Text grammar for polynomials and rational functions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' '-'? digits)?
//! atom   := digits | 'x' | '(' expr ')'
//! ```
//!
//! Whitespace is insignificant. A fraction coefficient `a/b` is read as a
//! division of two integers, which yields the same value. The printed forms
//! of [`Poly`] and [`RatFunc`] always reparse to the same canonical value.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::poly::Poly;
use super::rational::RatFunc;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// Byte offset into the parsed string.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.message)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn err<T>(&self, offset: usize, message: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            offset,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn describe(&mut self) -> String {
        match self.peek() {
            Some(c) => format!("`{}`", c as char),
            None => "end of input".to_string(),
        }
    }

    fn expr(&mut self) -> PResult<RatFunc> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> PResult<RatFunc> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' {
                &acc * &rhs
            } else {
                match acc.checked_div(&rhs) {
                    Ok(q) => q,
                    Err(_) => return self.err(at, "division by zero"),
                }
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<RatFunc> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<RatFunc> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.pos;
        let Some(digits) = self.digits() else {
            let what = self.describe();
            return self.err(at, format!("expected an integer exponent, found {what}"));
        };
        let Ok(e) = digits.parse::<i64>() else {
            return self.err(at, "exponent too large");
        };
        let e = if negative { -e } else { e };
        base.pow(e).or_else(|_| self.err(at, "zero raised to a negative power"))
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> PResult<RatFunc> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(RatFunc::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    let what = self.describe();
                    return self.err(self.pos, format!("expected `)`, found {what}"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().expect("digit present");
                let n: BigInt = d.parse().expect("decimal digits");
                Ok(RatFunc::constant(BigRational::from_integer(n)))
            }
            _ => {
                let what = self.describe();
                self.err(at, format!("expected a number, `x` or `(`, found {what}"))
            }
        }
    }
}

pub fn parse_ratfunc(text: &str) -> Result<RatFunc, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    if p.peek().is_none() {
        return p.err(0, "empty expression");
    }
    let value = p.expr()?;
    if p.peek().is_some() {
        let what = p.describe();
        return p.err(p.pos, format!("unexpected {what}"));
    }
    Ok(value)
}

pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    let f = parse_ratfunc(text)?;
    if !f.is_polynomial() {
        return Err(ParseError {
            offset: 0,
            message: format!("`{text}` is not a polynomial"),
        });
    }
    Ok(f.num().clone())
}

impl std::str::FromStr for RatFunc {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ratfunc(s)
    }
}

impl std::str::FromStr for Poly {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}
