//! Text form of polynomials: `+ - * ^` with explicit `*`, parentheses,
//! integer and `a/b` rational literals, and exponents that are natural
//! numbers. Juxtaposition is not accepted.

use super::poly::{Poly, Ring};
use super::scalar::{Rat, Scalar};
use num_bigint::BigInt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unexpected character `{0}` at offset {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected `{0}` at offset {1}")]
    Expected(String, usize),
    #[error("exponent must be a natural number at offset {0}")]
    BadExponent(usize),
    #[error("bad numeric literal at offset {0}")]
    BadNumber(usize),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let mut num: String = chars[start..i].iter().collect();
                let mut den = String::from("1");
                if i < chars.len() && chars[i] == '/' {
                    i += 1;
                    let dstart = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if dstart == i {
                        return Err(ParseError::BadNumber(start));
                    }
                    den = chars[dstart..i].iter().collect();
                }
                if num.is_empty() {
                    num.push('0');
                }
                let n = BigInt::from_str(&num).map_err(|_| ParseError::BadNumber(start))?;
                let d = BigInt::from_str(&den).map_err(|_| ParseError::BadNumber(start))?;
                if d == BigInt::from(0) {
                    return Err(ParseError::BadNumber(start));
                }
                out.push((Tok::Num(Rat::new(n, d)), start));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), start));
            }
            _ => return Err(ParseError::UnexpectedChar(c, i)),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Arc<Ring>,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(usize::MAX)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.next();
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.next();
            let off = self.offset();
            match self.next() {
                Some(Tok::Num(n)) => {
                    use num_traits::{One, ToPrimitive};
                    if !n.denom().is_one() || n < Rat::from_integer(0.into()) {
                        return Err(ParseError::BadExponent(off));
                    }
                    let e = n
                        .numer()
                        .to_u32()
                        .ok_or(ParseError::BadExponent(off))?;
                    Ok(base.pow(e))
                }
                _ => Err(ParseError::BadExponent(off)),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Poly, ParseError> {
        let off = self.offset();
        match self.next() {
            Some(Tok::Num(n)) => Ok(Poly::constant(
                self.ring,
                Scalar::from_rat(&self.ring.coeff, n),
            )),
            Some(Tok::Ident(name)) => match self.ring.var_index(&name) {
                Some(ix) => Ok(Poly::var(self.ring, ix)),
                None => Err(ParseError::UnknownVariable(name)),
            },
            Some(Tok::Minus) => Ok(self.factor()?.neg()),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(ParseError::Expected(")".into(), off)),
                }
            }
            Some(t) => Err(ParseError::Expected(format!("operand, found {t:?}"), off)),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

/// Parse a polynomial in the shared text grammar over the given ring.
pub fn parse_poly(ring: &Arc<Ring>, input: &str) -> Result<Poly, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser { ring, toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        let off = p.offset();
        return Err(ParseError::Expected("end of input".into(), off));
    }
    Ok(e)
}
