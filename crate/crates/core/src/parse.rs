//! Series literal grammar: integer coefficients, `+`, `-`, `*`, `^` with a
//! non-negative integer exponent, parentheses, and variables of the ring.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' integer)?
//! atom   := integer | variable | '(' expr ')' | '-' factor
//! ```

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::series::{Ring, Series};

pub fn parse_series(input: &str, ring: &Arc<Ring>, order: i32) -> Result<Series> {
    let mut p = Parser { src: input, bytes: input.as_bytes(), pos: 0, ring, order };
    p.skip_ws();
    if p.pos == p.bytes.len() {
        return Err(p.err("empty expression"));
    }
    let s = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(s)
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    ring: &'a Arc<Ring>,
    order: i32,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { input: self.src.to_string(), pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Series> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
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
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Series> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = acc.mul_to(&rhs, self.order);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Series> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
            if e > 255 {
                return Err(self.err("exponent too large"));
            }
            return Ok(base.pow(e).with_order(self.order));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u128> {
        let start = self.pos;
        let mut v: u128 = 0;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add((self.bytes[self.pos] - b'0') as u128))
                .ok_or_else(|| self.err("integer overflow"))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<Series> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                let k = self.ring.field();
                let c = (v % k.p() as u128) as u64;
                Ok(Series::constant(self.ring, c, self.order))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric() || matches!(self.bytes[self.pos], b'_' | b'\''))
                {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                match self.ring.var_index(name) {
                    Some(i) => Ok(Series::var(self.ring, i, self.order)),
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("unknown variable `{name}` (ring has {:?})", self.ring.vars())))
                    }
                }
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    #[test]
    fn parses_nested_products() {
        let r = Ring::new(FieldSpec::prime(3).unwrap(), &["x", "y", "z"]).unwrap();
        let a = parse_series("-x^2 + (y^3 + z^2)*(y^2 + z)", &r, 10).unwrap();
        let b = parse_series("-x^2 + y^5 + y^3*z + z^2*y^2 + z^3", &r, 10).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_series("3*x", &r, 4).unwrap().len(), 0);
        assert_eq!(parse_series("- - x", &r, 4).unwrap(), parse_series("x", &r, 4).unwrap());
    }

    #[test]
    fn reports_offending_position() {
        let r = Ring::new(FieldSpec::prime(2).unwrap(), &["x", "y"]).unwrap();
        match parse_series("x + w", &r, 4) {
            Err(Error::Parse { pos, msg, .. }) => {
                assert_eq!(pos, 4);
                assert!(msg.contains("unknown variable"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_series("x +", &r, 4).is_err());
        assert!(parse_series("(x", &r, 4).is_err());
        assert!(parse_series("", &r, 4).is_err());
    }
}
