//! Polynomial expressions in `x, y, z` with rational coefficients.
//!
//! Grammar (whitespace is insignificant, implicit multiplication is not
//! allowed):
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := 'x' | 'y' | 'z' | rational | '(' expr ')'
//! ```
//!
//! A rational literal is `p` or `p/q` with decimal digits. The printer of
//! [`Series`] emits this grammar, so printed series parse back unchanged.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::rational::Rational;
use crate::series::{Series, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

/// Abstract syntax tree of an expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(Var),
    Num(Rational),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Evaluates the tree as a series modulo `m^order`.
    pub fn lower(&self, order: u32) -> Series {
        match self {
            Expr::Var(v) => Series::var(*v, order),
            Expr::Num(c) => Series::constant(c.clone(), order),
            Expr::Neg(e) => -&e.lower(order),
            Expr::Add(a, b) => &a.lower(order) + &b.lower(order),
            Expr::Sub(a, b) => &a.lower(order) - &b.lower(order),
            Expr::Mul(a, b) => &a.lower(order) * &b.lower(order),
            Expr::Pow(a, e) => a.lower(order).pow(*e),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => write!(f, "{}", v.name()),
            Expr::Num(c) => write!(f, "{c}"),
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a})*({b})"),
            Expr::Pow(a, e) => write!(f, "({a})^{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(Var),
    Num(Rational),
    Int(u64),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |offset: usize, message: String| ParseError { offset, message };
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            'x' => out.push((start, Tok::Var(Var::X))),
            'y' => out.push((start, Tok::Var(Var::Y))),
            'z' => out.push((start, Tok::Var(Var::Z))),
            '+' => out.push((start, Tok::Plus)),
            '-' | '\u{2212}' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            ',' => out.push((start, Tok::Comma)),
            '0'..='9' => {
                let digits = |mut j: usize| {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    j
                };
                let end = digits(i);
                let num: BigInt = text[i..end].parse().expect("digits");
                let mut j = end;
                while j < bytes.len() && (bytes[j] as char).is_ascii_whitespace() {
                    j += 1;
                }
                if j < bytes.len() && bytes[j] == b'/' {
                    let mut k = j + 1;
                    while k < bytes.len() && (bytes[k] as char).is_ascii_whitespace() {
                        k += 1;
                    }
                    let dend = digits(k);
                    if dend == k {
                        return Err(err(k, "expected denominator digits after '/'".into()));
                    }
                    let den: BigInt = text[k..dend].parse().expect("digits");
                    if den == BigInt::from(0) {
                        return Err(err(k, "zero denominator".into()));
                    }
                    out.push((start, Tok::Num(Rational::from_bigints(num, den))));
                    i = dend;
                } else {
                    let tok = match u64::try_from(&num) {
                        Ok(v) => Tok::Int(v),
                        Err(_) => Tok::Num(Rational::from(num)),
                    };
                    out.push((start, tok));
                    i = end;
                }
                continue;
            }
            _ => {
                return Err(err(start, format!("unexpected character {c:?}")));
            }
        }
        i += c.len_utf8();
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let negate = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = Expr::Neg(Box::new(acc));
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.peek() {
                Some(Tok::Int(e)) => {
                    let Ok(e) = u32::try_from(*e) else {
                        return self.error("exponent too large");
                    };
                    self.pos += 1;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => self.error("expected unsigned integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let e = match self.peek() {
            Some(Tok::Var(v)) => Expr::Var(*v),
            Some(Tok::Num(c)) => Expr::Num(c.clone()),
            Some(Tok::Int(n)) => Expr::Num(Rational::from(BigInt::from(*n))),
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.error("expected ')'");
                }
                self.pos += 1;
                return Ok(inner);
            }
            Some(_) => return self.error("expected variable, number or '('"),
            None => return self.error("unexpected end of input"),
        };
        self.pos += 1;
        Ok(e)
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            self.error("unexpected trailing input")
        } else {
            Ok(())
        }
    }
}

/// Parses an expression into its syntax tree.
pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses an expression directly into a series modulo `m^order`.
pub fn parse_series(text: &str, order: u32) -> Result<Series, ParseError> {
    Ok(parse_expression(text)?.lower(order))
}

/// Parses a parenthesized, comma separated list `"(e1, e2, ...)"`.
pub fn parse_tuple(text: &str) -> Result<Vec<Expr>, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
    };
    if p.peek() != Some(&Tok::LParen) {
        return p.error("expected '('");
    }
    p.pos += 1;
    let mut items = vec![p.expr()?];
    loop {
        match p.peek() {
            Some(Tok::Comma) => {
                p.pos += 1;
                items.push(p.expr()?);
            }
            Some(Tok::RParen) => {
                p.pos += 1;
                break;
            }
            _ => return p.error("expected ',' or ')'"),
        }
    }
    p.finish()?;
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Monomial;

    #[test]
    fn simple_expression() {
        let s = parse_series("x*y - z^3", 8).unwrap();
        let expect = &(&Series::x(8) * &Series::y(8)) - &Series::z(8).pow(3);
        assert_eq!(s, expect);
    }

    #[test]
    fn rationals_and_parentheses() {
        let s = parse_series("3/4*(x + 1/2)^2", 6).unwrap();
        assert_eq!(s.coeff(&Monomial::new(2, 0, 0)), Rational::new(3, 4));
        assert_eq!(s.coeff(&Monomial::new(1, 0, 0)), Rational::new(3, 4));
        assert_eq!(s.constant_term(), Rational::new(3, 16));
    }

    #[test]
    fn error_offset() {
        let e = parse_expression("x*y + + z").unwrap_err();
        assert_eq!(e.offset, 6);
        assert!(parse_expression("2x").is_err());
        assert!(parse_expression("x^").is_err());
        assert!(parse_expression("(x").is_err());
        assert_eq!(parse_expression("x $").unwrap_err().offset, 2);
    }

    #[test]
    fn truncation_on_lowering() {
        let s = parse_series("z^5 + x", 5).unwrap();
        assert_eq!(s, Series::x(5));
    }

    #[test]
    fn round_trip() {
        let text = "x*y + x*z^2 + y^2*z - z^6";
        let s = parse_series(text, 32).unwrap();
        assert_eq!(s.to_string(), text);
        assert_eq!(parse_series(&s.to_string(), 32).unwrap(), s);
        let neg = parse_series("-1/3 + -x", 4);
        assert!(neg.is_err());
        let s = parse_series("-1/3 - x", 4).unwrap();
        assert_eq!(parse_series(&s.to_string(), 4).unwrap(), s);
    }

    #[test]
    fn tuples() {
        let t = parse_tuple("(x - z^2, y)").unwrap();
        assert_eq!(t.len(), 2);
        assert!(parse_tuple("x, y").is_err());
    }
}
