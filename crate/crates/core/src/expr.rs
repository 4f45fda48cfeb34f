//! Polynomial literals over `F_p` in the variables `x`, `y` and `h`.
//!
//! Grammar (whitespace ignored, juxtaposition multiplies):
//!
//! ```text
//! equation := expr ( '=' expr )?
//! expr     := term ( ('+' | '-') term )*
//! term     := unary ( '*'? unary )*
//! unary    := '-' unary | power
//! power    := atom ( '^' integer )?
//! atom     := integer | 'x' | 'y' | 'h' | '(' expr ')'
//! ```
//!
//! `h` is a placeholder that cover templates substitute with basis functions.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::ff::{Elem, ExtField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {found:?} at offset {pos} in {input:?}")]
    UnexpectedChar { input: String, pos: usize, found: char },
    #[error("unexpected end of input in {0:?}")]
    UnexpectedEnd(String),
    #[error("exponent too large at offset {pos} in {input:?}")]
    ExponentTooLarge { input: String, pos: usize },
    #[error("more than one '=' in {0:?}")]
    TooManyEquals(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Var {
    X = 0,
    Y = 1,
    H = 2,
}

type Monomial = [u32; 3];

/// A sparse polynomial in `x, y, h` with coefficients in `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    p: u32,
    terms: BTreeMap<Monomial, u32>,
}

const MAX_EXPONENT: u32 = 64;

impl MPoly {
    pub fn zero(p: u32) -> Self {
        MPoly { p, terms: BTreeMap::new() }
    }

    pub fn constant(p: u32, c: i64) -> Self {
        let mut out = MPoly::zero(p);
        out.insert([0; 3], c.rem_euclid(p as i64) as u32);
        out
    }

    pub fn var(p: u32, v: Var) -> Self {
        let mut m = [0; 3];
        m[v as usize] = 1;
        let mut out = MPoly::zero(p);
        out.insert(m, 1);
        out
    }

    /// Parses an expression or an equation `lhs = rhs` (as `lhs - rhs`).
    pub fn parse(input: &str, p: u32) -> Result<Self, ParseError> {
        let mut parts = input.split('=');
        let lhs = parts.next().unwrap_or("");
        let rhs = parts.next();
        if parts.next().is_some() {
            return Err(ParseError::TooManyEquals(input.to_string()));
        }
        let l = Parser::new(lhs, p).parse_all()?;
        match rhs {
            None => Ok(l),
            Some(r) => Ok(l.sub(&Parser::new(r, p).parse_all()?)),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, m: Monomial, c: u32) {
        let c = c % self.p;
        let entry = self.terms.entry(m).or_insert(0);
        *entry = (*entry + c) % self.p;
        if *entry == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (&m, &c) in &other.terms {
            out.insert(m, c);
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        let p = self.p;
        MPoly { p, terms: self.terms.iter().map(|(&m, &c)| (m, (p - c) % p)).collect() }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.p);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let m = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
                out.insert(m, ca * cb % self.p);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::constant(self.p, 1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Largest exponent of `v` appearing; 0 for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m[v as usize]).max().unwrap_or(0)
    }

    /// Replaces `h` by `value`.
    pub fn substitute_h(&self, value: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.p);
        for (m, &c) in &self.terms {
            let mut base = MPoly::zero(self.p);
            base.insert([m[0], m[1], 0], c);
            out = out.add(&base.mul(&value.pow(m[2])));
        }
        out
    }

    /// Coefficients of `y^0, y^1, …` as polynomials in `x` (and `h`).
    pub fn y_coefficients(&self) -> Vec<MPoly> {
        let mut out = vec![MPoly::zero(self.p); self.degree_in(Var::Y) as usize + 1];
        for (m, &c) in &self.terms {
            out[m[1] as usize].insert([m[0], 0, m[2]], c);
        }
        out
    }

    /// Evaluates at `(x, y)`; `h` must not occur.
    pub fn eval(&self, f: &ExtField, x: Elem, y: Elem) -> Elem {
        debug_assert_eq!(self.degree_in(Var::H), 0, "unsubstituted h");
        let mut acc = f.zero();
        let mut xp = vec![f.one()];
        let mut yp = vec![f.one()];
        for (m, &c) in &self.terms {
            while xp.len() <= m[0] as usize {
                xp.push(f.mul(*xp.last().unwrap(), x));
            }
            while yp.len() <= m[1] as usize {
                yp.push(f.mul(*yp.last().unwrap(), y));
            }
            let t = f.mul(f.from_fp(c), f.mul(xp[m[0] as usize], yp[m[1] as usize]));
            acc = f.add(acc, t);
        }
        acc
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, &c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            if c != 1 || m.iter().all(|&e| e == 0) {
                factors.push(c.to_string());
            }
            for (name, &e) in ["x", "y", "h"].iter().zip(m) {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    p: u32,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str, p: u32) -> Self {
        let chars = input.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Parser { input, chars, pos: 0, p }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn unexpected(&self) -> ParseError {
        match self.chars.get(self.pos) {
            Some(&(pos, found)) => ParseError::UnexpectedChar { input: self.input.to_string(), pos, found },
            None => ParseError::UnexpectedEnd(self.input.to_string()),
        }
    }

    fn parse_all(mut self) -> Result<MPoly, ParseError> {
        let e = self.expr()?;
        if self.peek().is_some() {
            return Err(self.unexpected());
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(c) if c == '(' || c.is_ascii_digit() || matches!(c, 'x' | 'y' | 'h') => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly, ParseError> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<MPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let at = self.chars.get(self.pos).map_or(self.input.len(), |&(i, _)| i);
            let e = self.integer()?;
            if e > MAX_EXPONENT as u64 {
                return Err(ParseError::ExponentTooLarge { input: self.input.to_string(), pos: at });
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            v = v.saturating_mul(10).saturating_add(c as u64 - '0' as u64);
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.unexpected());
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<MPoly, ParseError> {
        match self.peek() {
            Some('x') => {
                self.pos += 1;
                Ok(MPoly::var(self.p, Var::X))
            }
            Some('y') => {
                self.pos += 1;
                Ok(MPoly::var(self.p, Var::Y))
            }
            Some('h') => {
                self.pos += 1;
                Ok(MPoly::var(self.p, Var::H))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(MPoly::constant(self.p, (v % self.p as u64) as i64))
            }
            _ => Err(self.unexpected()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_curve_equations() {
        let e = MPoly::parse("y^2 + y = x^3 + x", 2).unwrap();
        let manual = MPoly::parse("y^2 + y + x^3 + x", 2).unwrap();
        assert_eq!(e, manual);
        let e3 = MPoly::parse("y^2 = x^3 - x + 1", 3).unwrap();
        assert_eq!(e3, MPoly::parse("y^2 + 2x^3 + x + 2", 3).unwrap());
    }

    #[test]
    fn implicit_multiplication_and_parentheses() {
        let a = MPoly::parse("(x^2+x)(xy+x+y) + 1", 2).unwrap();
        let b = MPoly::parse("(x^2+x)*(x*y+x+y) + 1", 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.degree_in(Var::X), 3);
        assert_eq!(MPoly::parse("2x", 2).unwrap(), MPoly::zero(2));
    }

    #[test]
    fn identity_from_f3_model() {
        // (xy + x^2 - 1)^2 = (x^3 - x)(x^2 - y + x) + 1 on y^2 = x^3 - x + 1
        let lhs = MPoly::parse("(xy + x^2 - 1)^2 - (x^3 - x)(x^2 - y + x) - 1", 3).unwrap();
        let curve = MPoly::parse("y^2 - x^3 + x - 1", 3).unwrap();
        // lhs = x^2 * (y^2 - x^3 + x - 1)
        assert_eq!(lhs, MPoly::parse("x^2", 3).unwrap().mul(&curve));
    }

    #[test]
    fn substitution() {
        let b = MPoly::parse("(x^2+x)h", 2).unwrap();
        let bx = b.substitute_h(&MPoly::parse("x", 2).unwrap());
        assert_eq!(bx, MPoly::parse("x^3 + x^2", 2).unwrap());
        let y_coeffs = MPoly::parse("y^2 + (x^3+x+1)y + x^2 + x", 2).unwrap().y_coefficients();
        assert_eq!(y_coeffs.len(), 3);
        assert_eq!(y_coeffs[1], MPoly::parse("x^3+x+1", 2).unwrap());
    }

    #[test]
    fn errors() {
        assert!(matches!(MPoly::parse("y^2 + z", 2), Err(ParseError::UnexpectedChar { found: 'z', .. })));
        assert!(matches!(MPoly::parse("(x + 1", 2), Err(ParseError::UnexpectedEnd(_))));
        assert!(matches!(MPoly::parse("x = y = 1", 2), Err(ParseError::TooManyEquals(_))));
        assert!(matches!(MPoly::parse("x^999", 2), Err(ParseError::ExponentTooLarge { .. })));
    }

    #[test]
    fn display_round_trips() {
        let a = MPoly::parse("(x^2+x)(xy+x+y) + 1", 2).unwrap();
        assert_eq!(MPoly::parse(&a.to_string(), 2).unwrap(), a);
    }
}
