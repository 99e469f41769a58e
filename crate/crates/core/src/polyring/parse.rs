//! Recursive-descent reader for the polynomial grammar
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' natural)?
//! base   := identifier | natural | '(' expr ')'
//! ```

use super::{Polynomial, Ring, MAX_EXPONENT};
use crate::error::{Error, Result};

pub fn parse_poly(text: &str, ring: &Ring) -> Result<Polynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
    };
    let f = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected character"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Ring,
}

fn max_exponent(f: &Polynomial) -> u64 {
    f.terms()
        .iter()
        .flat_map(|(m, _)| m.exponents().iter().map(|&x| x as u64))
        .max()
        .unwrap_or(0)
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

    fn syntax(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { acc.add(&rhs)? } else { acc.sub(&rhs)? };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            if max_exponent(&acc) + max_exponent(&rhs) > MAX_EXPONENT {
                return Err(Error::ExponentOverflow);
            }
            acc = acc.mul(&rhs)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.base()?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            if !matches!(self.peek(), Some(b'0'..=b'9')) {
                return Err(self.syntax("expected exponent"));
            }
            let n = self.exponent()?;
            if max_exponent(&base).saturating_mul(n) > MAX_EXPONENT {
                return Err(Error::ExponentOverflow);
            }
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'0'..=b'9') => {
                let m = self.ring.p().get() as u64;
                let mut v: u64 = 0;
                while let Some(d @ b'0'..=b'9') = self.src.get(self.pos).copied() {
                    v = (v * 10 + (d - b'0') as u64) % m;
                    self.pos += 1;
                }
                Ok(Polynomial::constant(self.ring, v as i128))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while let Some(c) = self.src.get(self.pos) {
                    if c.is_ascii_alphanumeric() || *c == b'_' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.ring.index_of(name) {
                    Some(i) => Ok(Polynomial::variable(self.ring, i)),
                    None => Err(Error::UnknownIdentifier {
                        offset: start,
                        name: name.to_string(),
                    }),
                }
            }
            Some(_) => Err(self.syntax("expected variable, number or `(`")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn exponent(&mut self) -> Result<u64> {
        let mut v: u64 = 0;
        while let Some(d @ b'0'..=b'9') = self.src.get(self.pos).copied() {
            v = v * 10 + (d - b'0') as u64;
            if v > MAX_EXPONENT {
                return Err(Error::ExponentOverflow);
            }
            self.pos += 1;
        }
        Ok(v)
    }
}
