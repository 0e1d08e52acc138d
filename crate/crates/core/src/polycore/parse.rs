//! Textual polynomial syntax: `x^2 + y^2 - 25`, `3/2*x*y`, `(x - 1)*(x + 1)`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{PolyError, Polynomial, Rational, Ring};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Ring,
}

impl Polynomial {
    /// Parses `text` over `ring`; every identifier must name a ring variable.
    pub fn parse(text: &str, ring: &Ring) -> Result<Polynomial, PolyError> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            ring,
        };
        let value = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(value)
    }
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
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

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
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

    fn term(&mut self) -> Result<Polynomial, PolyError> {
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
                    let c = d
                        .constant_value()
                        .filter(|c| !c.is_zero())
                        .ok_or_else(|| self.error("division by a non-constant or zero"))?;
                    acc = acc.scale(&c.recip());
                }
                // juxtaposition: `2x`, `3(x+1)`
                Some(c) if c.is_ascii_alphabetic() || c == b'_' || c == b'(' => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let e: u32 = digits
                .parse()
                .map_err(|_| self.error("expected a non-negative integer exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = digits.parse().map_err(|_| self.error("bad integer"))?;
                Ok(Polynomial::constant(self.ring, Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Polynomial::var_named(self.ring, name)
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}
