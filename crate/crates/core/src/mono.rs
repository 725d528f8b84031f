//! Exponent vectors in graded-lex order.
//!
//! Monomials compare first by total degree, then lexicographically with the
//! first variable largest, so that `X1 < X2 < X1^2 < X1*X2 < X2^2`.

use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u16>,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { degree, exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            degree: 0,
            exps: vec![0; nvars],
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { degree: 1, exps }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// Moves the exponents into a larger variable set starting at `offset`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Monomial {
        let mut exps = vec![0; nvars];
        exps[offset..offset + self.exps.len()].copy_from_slice(&self.exps);
        Monomial {
            degree: self.degree,
            exps,
        }
    }

    /// Formats as `X1^2*X3`, using `names[i]` for variable `i`.
    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.is_one() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names(i)),
                _ => parts.push(format!("{}^{}", names(i), e)),
            }
        }
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|i| format!("X{}", i + 1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let x1 = Monomial::new(vec![1, 0]);
        let x2 = Monomial::new(vec![0, 1]);
        let x1sq = Monomial::new(vec![2, 0]);
        let x1x2 = Monomial::new(vec![1, 1]);
        let x2sq = Monomial::new(vec![0, 2]);
        let mut v = vec![x2sq.clone(), x1x2.clone(), x1.clone(), x1sq.clone(), x2.clone()];
        v.sort();
        assert_eq!(v, vec![x1, x2, x1sq, x1x2, x2sq]);
    }

    #[test]
    fn render_names() {
        let m = Monomial::new(vec![2, 0, 1]);
        assert_eq!(m.to_string(), "X1^2*X3");
        assert_eq!(Monomial::one(3).to_string(), "1");
    }
}
