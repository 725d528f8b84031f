//! Coefficient strings.
//!
//! `Z/p^K`: a decimal integer (negative values are reduced).
//! `F_p[t]/t^K`: `c0+c1*t+c2*t^2`.
//! Nested: a sum of `c*t1^a1*...*tm^am`, where `c` is a base coefficient,
//! parenthesised when it has more than one term.
//!
//! The parser accepts any sum of products of integers, `t`, `t1..tm` and
//! parenthesised subexpressions, with `^n` powers. The formatter is canonical.

use super::{Elem, RingKind, RingSpec};
use crate::error::{Error, Result};

struct Parser<'a> {
    spec: &'a RingSpec,
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

    fn number(&mut self) -> Result<u128> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(start, "number too large"))
    }

    fn expr(&mut self) -> Result<Elem> {
        let spec = self.spec;
        let mut acc = spec.zero();
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                negate = true;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if negate { spec.sub(&acc, &t) } else { spec.add(&acc, &t) };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Elem> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.spec.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Elem> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let start = self.pos;
            let n = self.number()?;
            let n = u64::try_from(n).map_err(|_| Error::parse(start, "exponent too large"))?;
            return Ok(self.spec.pow(&atom, n));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Elem> {
        let spec = self.spec;
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::parse(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b't') => {
                self.pos += 1;
                if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    let idx = self.number()?;
                    if idx == 0 {
                        return Err(Error::parse(start, "variables are numbered from t1"));
                    }
                    spec.t_var(idx as usize - 1)
                        .map_err(|e| Error::parse(start, e.to_string()))
                } else {
                    spec.base_t()
                        .ok_or_else(|| Error::parse(start, format!("{spec} has no variable t")))
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(int_elem(spec, n))
            }
            Some(c) => Err(Error::parse(self.pos, format!("unexpected '{}'", c as char))),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }
}

fn int_elem(spec: &RingSpec, n: u128) -> Elem {
    // Split into 64-bit halves when the value does not fit in i128.
    match i128::try_from(n) {
        Ok(v) => spec.from_int(v),
        Err(_) => {
            let hi = spec.from_int((n >> 64) as i128);
            let lo = spec.from_int((n & u64::MAX as u128) as i128);
            let shift = spec.mul(&spec.from_int(1 << 32), &spec.from_int(1 << 32));
            spec.add(&spec.mul(&hi, &shift), &lo)
        }
    }
}

impl RingSpec {
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let mut p = Parser {
            spec: self,
            src: s.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        if p.peek().is_some() {
            return Err(Error::parse(p.pos, "trailing input"));
        }
        Ok(e)
    }

    pub fn format_elem(&self, e: &Elem) -> String {
        match e {
            Elem::Residue(r) => r.to_string(),
            Elem::Poly(c) => {
                let mut parts = Vec::new();
                for (i, &u) in c.iter().enumerate() {
                    if u == 0 {
                        continue;
                    }
                    parts.push(match (i, u) {
                        (0, _) => u.to_string(),
                        (1, 1) => "t".to_string(),
                        (1, _) => format!("{u}*t"),
                        (_, 1) => format!("t^{i}"),
                        _ => format!("{u}*t^{i}"),
                    });
                }
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join("+")
                }
            }
            Elem::Nested(map) => {
                let base = self.base().expect("nested payload needs a nested spec");
                if map.is_empty() {
                    return "0".into();
                }
                let parts: Vec<String> = map
                    .iter()
                    .map(|(mono, c)| {
                        let cs = base.format_elem(c);
                        if mono.is_one() {
                            return cs;
                        }
                        let ms = mono.render(&|i| format!("t{}", i + 1));
                        if cs == "1" {
                            ms
                        } else if cs.contains('+') {
                            format!("({cs})*{ms}")
                        } else {
                            format!("{cs}*{ms}")
                        }
                    })
                    .collect();
                parts.join("+")
            }
        }
    }

    /// Canonical integer representative of a `Z/p^K` residue or of each
    /// F_p digit; used when lifting residues for exact tests.
    pub fn residue_value(&self, e: &Elem) -> Option<u64> {
        match (self.kind(), e) {
            (RingKind::PAdic, Elem::Residue(r)) => Some(*r),
            _ => None,
        }
    }
}
