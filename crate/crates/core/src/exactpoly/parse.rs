//! Small infix reader for polynomial literals such as `3/2*z^4 - 6i*t*z^2 + 6t^2`.
//!
//! Grammar: sums of products of powers of atoms. Atoms are integers, `i`,
//! the variables `z`, `w`, `t`, or parenthesised expressions. Juxtaposition
//! (`6it`, `2(z-1)`) multiplies. Division is allowed only by constants.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use super::gaussian::GaussianRational;
use super::tripoly::{TriPoly, Var};
use crate::error::{Error, Result};

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at column {}", self.pos + 1))
    }

    fn expr(&mut self) -> Result<TriPoly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<TriPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(self.err("division by a non-constant or zero"));
                    }
                    let inv = d
                        .coeff(Default::default())
                        .inv()
                        .ok_or_else(|| self.err("division by zero"))?;
                    acc = acc.scale(&inv);
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<TriPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let k: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| self.err("expected exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<TriPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(TriPoly::var(Var::Z))
            }
            Some(b'w') => {
                self.pos += 1;
                Ok(TriPoly::var(Var::W))
            }
            Some(b't') => {
                self.pos += 1;
                Ok(TriPoly::var(Var::T))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(TriPoly::constant(GaussianRational::i()))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n = BigInt::from_str(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
                    .map_err(|_| self.err("bad integer"))?;
                Ok(TriPoly::constant(n.into()))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

impl FromStr for TriPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut r = Reader {
            src: s.as_bytes(),
            pos: 0,
        };
        if r.peek().is_none() {
            return Err(r.err("empty expression"));
        }
        let p = r.expr()?;
        if r.peek().is_some() {
            return Err(r.err("trailing input"));
        }
        Ok(p)
    }
}

/// Parses a polynomial literal, panicking on malformed input. Intended for
/// tests and compiled-in constants.
pub fn poly(s: &str) -> TriPoly {
    s.parse()
        .unwrap_or_else(|e| panic!("bad polynomial literal {s:?}: {e}"))
}

impl GaussianRational {
    /// Parses a constant literal such as `-1/2` or `(1+6i)/3`.
    pub fn parse_literal(s: &str) -> Result<Self> {
        let p: TriPoly = s.parse()?;
        if !p.is_constant() {
            return Err(Error::Parse(format!("'{s}' is not a constant")));
        }
        Ok(if p.is_zero() {
            GaussianRational::zero()
        } else {
            p.coeff(Default::default())
        })
    }
}
