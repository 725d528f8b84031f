//! Group interfaces shared by standard groups, their finite quotients, the
//! transversal extension and plain multiplication tables.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::par::{self, Execution};

pub trait Group: Sync {
    type Element: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn identity(&self) -> Self::Element;
    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn inv(&self, a: &Self::Element) -> Self::Element;

    /// Square-and-multiply; negative exponents go through [`Group::inv`].
    fn pow(&self, a: &Self::Element, n: i64) -> Self::Element {
        let mut base = if n < 0 { self.inv(a) } else { a.clone() };
        let mut n = n.unsigned_abs();
        let mut acc = self.identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// A group whose elements can be listed.
pub trait FiniteGroup: Group {
    /// All elements in a fixed order; the identity need not come first.
    fn elements(&self) -> &[Self::Element];

    fn order(&self) -> usize {
        self.elements().len()
    }
}

/// A finite group given by its multiplication table on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableGroup {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
    elements: Vec<usize>,
}

/// First violation found while checking a multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableDefect {
    Shape(String),
    Identity { element: usize },
    Inverse { element: usize },
    Associativity { a: usize, b: usize, c: usize },
}

impl TableGroup {
    /// Builds the table without checking the group axioms beyond shape; see
    /// [`TableGroup::check`].
    pub fn new(mul: Vec<Vec<usize>>, inv: Vec<usize>, identity: usize) -> Result<Self> {
        let n = mul.len();
        if n == 0 || identity >= n || inv.len() != n {
            return Err(Error::Transversal("table shape is inconsistent".into()));
        }
        if mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) || inv.iter().any(|&x| x >= n) {
            return Err(Error::Transversal("table entries out of range".into()));
        }
        Ok(TableGroup {
            mul,
            inv,
            identity,
            elements: (0..n).collect(),
        })
    }

    /// Cayley table of a finite group, indexing elements in listing order.
    pub fn from_finite<G: FiniteGroup>(g: &G) -> Self {
        Self::from_finite_with(g, Execution::default())
    }

    /// As [`TableGroup::from_finite`], rows computed under `exec`.
    pub fn from_finite_with<G: FiniteGroup>(g: &G, exec: Execution) -> Self {
        let elems = g.elements();
        let index: HashMap<&G::Element, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mul = par::map_slice(exec, elems, |a| elems.iter().map(|b| index[&g.mul(a, b)]).collect());
        let inv = elems.iter().map(|a| index[&g.inv(a)]).collect();
        TableGroup {
            mul,
            inv,
            identity: index[&g.identity()],
            elements: (0..elems.len()).collect(),
        }
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inv
    }

    /// Identity, inverse and associativity laws, exhaustively.
    pub fn check(&self) -> Option<TableDefect> {
        self.check_with(Execution::default())
    }

    /// As [`TableGroup::check`]; the defect reported is the first in
    /// lexicographic order whatever `exec` is.
    pub fn check_with(&self, exec: Execution) -> Option<TableDefect> {
        let n = self.mul.len();
        let e = self.identity;
        for a in 0..n {
            if self.mul[e][a] != a || self.mul[a][e] != a {
                return Some(TableDefect::Identity { element: a });
            }
            if self.mul[a][self.inv[a]] != e || self.mul[self.inv[a]][a] != e {
                return Some(TableDefect::Inverse { element: a });
            }
        }
        par::find_first(exec, n, |a| {
            (0..n).find_map(|b| {
                let ab = self.mul[a][b];
                (0..n)
                    .find(|&c| self.mul[ab][c] != self.mul[a][self.mul[b][c]])
                    .map(|c| TableDefect::Associativity { a, b, c })
            })
        })
    }
}

impl Group for TableGroup {
    type Element = usize;

    fn identity(&self) -> usize {
        self.identity
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.mul[*a][*b]
    }

    fn inv(&self, a: &usize) -> usize {
        self.inv[*a]
    }
}

impl FiniteGroup for TableGroup {
    fn elements(&self) -> &[usize] {
        &self.elements
    }
}
