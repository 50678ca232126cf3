//! Minimal expression parser used to transcribe connection matrices
//! legibly: integers, named variables, `+ - * / ^` and parentheses.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::ring::Ring;

struct Parser<'a, R: Ring, F: Fn(&str) -> Option<R::Elem>> {
    ring: &'a R,
    vars: F,
    chars: Vec<char>,
    pos: usize,
}

impl<'a, R: Ring, F: Fn(&str) -> Option<R::Elem>> Parser<'a, R, F> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<R::Elem> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.add(&acc, &t);
                }
                Some('-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<R::Elem> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = self.ring.mul(&acc, &f);
                }
                Some('/') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = self.ring.try_div(&acc, &f)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<R::Elem> {
        self.skip_ws();
        let base = match self.peek() {
            Some('-') => {
                self.pos += 1;
                let f = self.factor()?;
                return Ok(self.ring.neg(&f));
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("expected `)`".into()));
                }
                e
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                let q: Rational = text
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad number `{text}`")))?;
                self.ring.from_rational(&q)
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                (self.vars)(&name).ok_or(Error::UnknownVariable(name))?
            }
            other => return Err(Error::Parse(format!("unexpected token {other:?}"))),
        };
        self.skip_ws();
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            let text: String = self.chars[start..self.pos].iter().collect();
            let exp: u32 = text
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent `{text}`")))?;
            return Ok(self.ring.pow(&base, exp));
        }
        Ok(base)
    }
}

pub fn parse_expr<R: Ring>(
    ring: &R,
    vars: impl Fn(&str) -> Option<R::Elem>,
    input: &str,
) -> Result<R::Elem> {
    let mut p = Parser { ring, vars, chars: input.chars().collect(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(Error::Parse(format!("trailing input in `{input}`")));
    }
    Ok(e)
}

/// Parses a matrix given row-wise entry expressions.
pub fn parse_matrix<R: Ring>(
    ring: &R,
    vars: impl Fn(&str) -> Option<R::Elem> + Copy,
    rows: &[&[&str]],
) -> Result<crate::matrix::Matrix<R::Elem>> {
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let mut r = Vec::with_capacity(row.len());
        for entry in *row {
            r.push(parse_expr(ring, vars, entry)?);
        }
        out.push(r);
    }
    Ok(crate::matrix::Matrix::from_rows(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;
    use crate::ring::RationalField;

    #[test]
    fn parses_polynomials() {
        let ring = PolyRing::new(RationalField, &["q1", "q2"]);
        let vars = |name: &str| ring.var_by_name(name).ok();
        let p = parse_expr(&ring, vars, "2*q2*(4*q1 - 1) - q1^2/2").unwrap();
        let q = {
            let q1 = ring.var(0);
            let q2 = ring.var(1);
            let a = ring.mul(
                &ring.mul(&ring.from_i64(2), &q2),
                &ring.sub(&ring.mul(&ring.from_i64(4), &q1), &ring.one()),
            );
            let b = ring.mul(
                &ring.from_rational(&Rational::new(1, 2)),
                &ring.mul(&q1, &q1),
            );
            ring.sub(&a, &b)
        };
        assert_eq!(p, q);
    }
}
