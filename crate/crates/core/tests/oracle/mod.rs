//! Independent reference computations: integer polynomials, 3x3 unitriangular
//! matrices and naive enumeration of finite Heisenberg quotients. Nothing here
//! calls into the series or group code of the crate.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

/// Integer polynomial, exponent vector to coefficient, no zero entries.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, i128>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: i128) -> Self {
        let mut p = IntPoly::zero(nvars);
        if c != 0 {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = IntPoly::zero(nvars);
        p.terms.insert(e, 1);
        p
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            let v = out.terms.entry(e.clone()).or_insert(0);
            *v += c;
            if *v == 0 {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        let mut out = IntPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let v = out.terms.entry(e.clone()).or_insert(0);
                *v += c1 * c2;
                if *v == 0 {
                    out.terms.remove(&e);
                }
            }
        }
        out
    }

    /// Coefficients reduced into `[0, q)`, zero terms dropped.
    pub fn reduce(&self, q: i128) -> BTreeMap<Vec<u32>, i128> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), c.rem_euclid(q)))
            .filter(|(_, c)| *c != 0)
            .collect()
    }
}

/// 3x3 matrix with polynomial entries.
pub type PolyMat = [[IntPoly; 3]; 3];

pub fn poly_mat_mul(a: &PolyMat, b: &PolyMat) -> PolyMat {
    let n = a[0][0].nvars;
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(IntPoly::zero(n), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
    })
}

pub fn poly_identity(nvars: usize) -> PolyMat {
    std::array::from_fn(|i| std::array::from_fn(|j| IntPoly::constant(nvars, (i == j) as i128)))
}

/// `(1 + N)^-1 = 1 - N + N^2` for strictly upper triangular `N`.
pub fn poly_unitri_inverse(a: &PolyMat) -> PolyMat {
    let n = a[0][0].nvars;
    let one = poly_identity(n);
    let nil: PolyMat = std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].sub(&one[i][j])));
    let nil2 = poly_mat_mul(&nil, &nil);
    std::array::from_fn(|i| std::array::from_fn(|j| one[i][j].sub(&nil[i][j]).add(&nil2[i][j])))
}

/// The matrix `[[1, x1, x3], [0, 1, x2], [0, 0, 1]]` where `xi` is variable
/// `offset + i - 1`.
pub fn heisenberg_generic(nvars: usize, offset: usize) -> PolyMat {
    let mut m = poly_identity(nvars);
    m[0][1] = IntPoly::var(nvars, offset);
    m[1][2] = IntPoly::var(nvars, offset + 1);
    m[0][2] = IntPoly::var(nvars, offset + 2);
    m
}

pub fn heisenberg_coords(m: &PolyMat) -> [IntPoly; 3] {
    [m[0][1].clone(), m[1][2].clone(), m[0][2].clone()]
}

/// Commutator `x^-1 y^-1 x y` of two generic Heisenberg matrices in six
/// variables, as coordinates.
pub fn heisenberg_commutator() -> [IntPoly; 3] {
    let x = heisenberg_generic(6, 0);
    let y = heisenberg_generic(6, 3);
    let xi = poly_unitri_inverse(&x);
    let yi = poly_unitri_inverse(&y);
    heisenberg_coords(&poly_mat_mul(&poly_mat_mul(&xi, &yi), &poly_mat_mul(&x, &y)))
}

/// Inverse of a generic Heisenberg matrix in three variables, as coordinates.
pub fn heisenberg_inverse() -> [IntPoly; 3] {
    heisenberg_coords(&poly_unitri_inverse(&heisenberg_generic(3, 0)))
}

/// Conjugate `g^-1 x g` of a generic matrix by a fixed numeric `g`.
pub fn heisenberg_conj_by(g: [i128; 3]) -> [IntPoly; 3] {
    let x = heisenberg_generic(3, 0);
    let mut gm = poly_identity(3);
    gm[0][1] = IntPoly::constant(3, g[0]);
    gm[1][2] = IntPoly::constant(3, g[1]);
    gm[0][2] = IntPoly::constant(3, g[2]);
    let gi = poly_unitri_inverse(&gm);
    heisenberg_coords(&poly_mat_mul(&poly_mat_mul(&gi, &x), &gm))
}

/// Coefficients of `1/(1+x) - 1 = sum_{k>=1} (-1)^k x^k`, by long division of
/// `1` by `1 + x`.
pub fn geometric_inverse(cutoff: usize) -> Vec<i128> {
    let mut q = vec![0i128; cutoff];
    let mut rem = vec![0i128; cutoff];
    rem[0] = 1;
    for k in 0..cutoff {
        q[k] = rem[k];
        if k + 1 < cutoff {
            rem[k + 1] -= q[k];
        }
    }
    q[0] -= 1;
    q
}

/// Numeric unitriangular matrix `(a, b, c)` with entries mod `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Heis {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

pub fn heis_mul(x: Heis, y: Heis, q: i128) -> Heis {
    let m = |h: Heis| [[1, h.a, h.c], [0, 1, h.b], [0, 0, 1i128]];
    let (p, r) = (m(x), m(y));
    let mut out = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| p[i][k] * r[k][j]).sum::<i128>().rem_euclid(q);
        }
    }
    Heis {
        a: out[0][1],
        b: out[1][2],
        c: out[0][2],
    }
}

pub fn heis_inv(x: Heis, q: i128) -> Heis {
    let a = (-x.a).rem_euclid(q);
    let b = (-x.b).rem_euclid(q);
    let c = (x.a * x.b - x.c).rem_euclid(q);
    let y = Heis { a, b, c };
    assert_eq!(heis_mul(x, y, q), Heis { a: 0, b: 0, c: 0 });
    y
}

pub fn heis_commutator(x: Heis, y: Heis, q: i128) -> Heis {
    let xi = heis_inv(x, q);
    let yi = heis_inv(y, q);
    heis_mul(heis_mul(xi, yi, q), heis_mul(x, y, q), q)
}

/// All matrices with entries in `p^n Z / p^m Z`.
pub fn heis_quotient(p: i128, n: u32, m: u32) -> Vec<Heis> {
    let q = p.pow(m);
    let step = p.pow(n);
    let vals: Vec<i128> = (0..q).step_by(step as usize).collect();
    let mut out = Vec::new();
    for &a in &vals {
        for &b in &vals {
            for &c in &vals {
                out.push(Heis { a, b, c });
            }
        }
    }
    out
}

/// Closure of `gens` under multiplication, by repeated products until stable.
pub fn heis_closure(gens: &BTreeSet<Heis>, q: i128) -> BTreeSet<Heis> {
    let mut set = gens.clone();
    set.insert(Heis { a: 0, b: 0, c: 0 });
    loop {
        let snapshot: Vec<Heis> = set.iter().copied().collect();
        let before = set.len();
        for &x in &snapshot {
            for &y in &snapshot {
                set.insert(heis_mul(x, y, q));
            }
        }
        if set.len() == before {
            return set;
        }
    }
}
