//! Truncated pro-p coefficient rings.
//!
//! Three shapes are supported: `Z/p^K` (a truncation of `Z_p`), `F_p[t]/t^K`
//! (a truncation of `F_p[[t]]`), and one level of nesting
//! `P[[t1..tm]]` over either of those, truncated at total t-degree `Dt`.
//! Every equality in this crate means equality at that precision.

mod map;
mod text;

pub use map::{CoeffMap, Specialisation};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mono::Monomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    PAdic,
    EqChar,
    Nested,
}

impl RingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RingKind::PAdic => "p-adic",
            RingKind::EqChar => "eq-char",
            RingKind::Nested => "nested",
        }
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
enum SpecKind {
    PAdic { p: u64, k: u32, modulus: u64 },
    EqChar { p: u64, k: u32 },
    Nested { base: RingSpec, m: usize, dt: u32 },
}

/// Description of a coefficient ring. Cheap to clone.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    inner: Arc<SpecKind>,
}

/// Largest modulus accepted for `Z/p^K`, so products fit in `u128`.
const MAX_MODULUS: u64 = 1 << 62;

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Valuation with respect to the maximal ideal; `Infinite` only for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn at_least(self, n: u32) -> bool {
        match self {
            Valuation::Finite(v) => v >= n,
            Valuation::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Canonical payload of a ring element. Only meaningful together with the
/// [`RingSpec`] it was produced by.
///
/// * `Residue(r)`: `0 <= r < p^K`.
/// * `Poly(c)`: `c.len() == K`, entries in `[0, p)`, lowest degree first.
/// * `Nested(map)`: nonzero base coefficients keyed by t-monomials of total
///   degree `< Dt`, in graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Residue(u64),
    Poly(Vec<u64>),
    Nested(BTreeMap<Monomial, Elem>),
}

impl RingSpec {
    pub fn p_adic(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidSpec(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidSpec("precision K must be at least 1".into()));
        }
        let modulus = p
            .checked_pow(k)
            .filter(|&m| m <= MAX_MODULUS)
            .ok_or_else(|| Error::InvalidSpec(format!("{p}^{k} is too large")))?;
        Ok(RingSpec {
            inner: Arc::new(SpecKind::PAdic { p, k, modulus }),
        })
    }

    pub fn eq_char(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidSpec(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidSpec(format!("characteristic {p} is too large")));
        }
        if k == 0 {
            return Err(Error::InvalidSpec("precision K must be at least 1".into()));
        }
        Ok(RingSpec {
            inner: Arc::new(SpecKind::EqChar { p, k }),
        })
    }

    pub fn nested(base: RingSpec, m: usize, dt: u32) -> Result<Self> {
        if base.kind() == RingKind::Nested {
            return Err(Error::InvalidSpec("nested base must be p-adic or eq-char".into()));
        }
        if m == 0 || dt == 0 {
            return Err(Error::InvalidSpec("nested rings need m >= 1 and Dt >= 1".into()));
        }
        Ok(RingSpec {
            inner: Arc::new(SpecKind::Nested { base, m, dt }),
        })
    }

    pub fn kind(&self) -> RingKind {
        match &*self.inner {
            SpecKind::PAdic { .. } => RingKind::PAdic,
            SpecKind::EqChar { .. } => RingKind::EqChar,
            SpecKind::Nested { .. } => RingKind::Nested,
        }
    }

    pub fn p(&self) -> u64 {
        match &*self.inner {
            SpecKind::PAdic { p, .. } | SpecKind::EqChar { p, .. } => *p,
            SpecKind::Nested { base, .. } => base.p(),
        }
    }

    /// Coefficient precision `K` (of the base ring when nested).
    pub fn precision(&self) -> u32 {
        match &*self.inner {
            SpecKind::PAdic { k, .. } | SpecKind::EqChar { k, .. } => *k,
            SpecKind::Nested { base, .. } => base.precision(),
        }
    }

    pub fn base(&self) -> Option<&RingSpec> {
        match &*self.inner {
            SpecKind::Nested { base, .. } => Some(base),
            _ => None,
        }
    }

    /// Number of formal variables `t1..tm` of a nested ring, 0 otherwise.
    pub fn t_vars(&self) -> usize {
        match &*self.inner {
            SpecKind::Nested { m, .. } => *m,
            _ => 0,
        }
    }

    /// Total t-degree cutoff of a nested ring.
    pub fn t_cutoff(&self) -> Option<u32> {
        match &*self.inner {
            SpecKind::Nested { dt, .. } => Some(*dt),
            _ => None,
        }
    }

    /// Smallest `n` such that every element of `m^n` is zero at precision.
    pub fn nilpotency(&self) -> u32 {
        match &*self.inner {
            SpecKind::PAdic { k, .. } | SpecKind::EqChar { k, .. } => *k,
            SpecKind::Nested { base, dt, .. } => base.nilpotency() + dt - 1,
        }
    }

    pub fn zero(&self) -> Elem {
        match &*self.inner {
            SpecKind::PAdic { .. } => Elem::Residue(0),
            SpecKind::EqChar { k, .. } => Elem::Poly(vec![0; *k as usize]),
            SpecKind::Nested { .. } => Elem::Nested(BTreeMap::new()),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i128) -> Elem {
        match &*self.inner {
            SpecKind::PAdic { modulus, .. } => Elem::Residue(n.rem_euclid(*modulus as i128) as u64),
            SpecKind::EqChar { p, k } => {
                let mut c = vec![0; *k as usize];
                c[0] = n.rem_euclid(*p as i128) as u64;
                Elem::Poly(c)
            }
            SpecKind::Nested { base, m, .. } => {
                let c = base.from_int(n);
                let mut map = BTreeMap::new();
                if !base.is_zero(&c) {
                    map.insert(Monomial::one(*m), c);
                }
                Elem::Nested(map)
            }
        }
    }

    /// The uniformiser-like generator `t` of an eq-char ring, or of the base
    /// of a nested eq-char ring. `None` for p-adic coefficients.
    pub fn base_t(&self) -> Option<Elem> {
        match &*self.inner {
            SpecKind::PAdic { .. } => None,
            SpecKind::EqChar { k, .. } => {
                let mut c = vec![0; *k as usize];
                if *k > 1 {
                    c[1] = 1;
                }
                Some(Elem::Poly(c))
            }
            SpecKind::Nested { .. } => {
                let b = self.base().unwrap();
                b.base_t().map(|e| self.embed_base(&e))
            }
        }
    }

    /// The formal variable `t_{i+1}` of a nested ring.
    pub fn t_var(&self, i: usize) -> Result<Elem> {
        match &*self.inner {
            SpecKind::Nested { base, m, dt } => {
                if i >= *m {
                    return Err(Error::InvalidSpec(format!("t{} out of range (m = {m})", i + 1)));
                }
                let mut map = BTreeMap::new();
                if *dt > 1 {
                    map.insert(Monomial::var(*m, i), base.one());
                }
                Ok(Elem::Nested(map))
            }
            _ => Err(Error::InvalidSpec(format!("{self} has no variable t{}", i + 1))),
        }
    }

    /// Image of a base element as a constant of a nested ring.
    pub fn embed_base(&self, c: &Elem) -> Elem {
        match &*self.inner {
            SpecKind::Nested { base, m, .. } => {
                let mut map = BTreeMap::new();
                if !base.is_zero(c) {
                    map.insert(Monomial::one(*m), c.clone());
                }
                Elem::Nested(map)
            }
            _ => c.clone(),
        }
    }

    /// Checks that `e` is a canonical payload for this ring.
    pub fn contains(&self, e: &Elem) -> bool {
        match (&*self.inner, e) {
            (SpecKind::PAdic { modulus, .. }, Elem::Residue(r)) => r < modulus,
            (SpecKind::EqChar { p, k }, Elem::Poly(c)) => c.len() == *k as usize && c.iter().all(|x| x < p),
            (SpecKind::Nested { base, m, dt }, Elem::Nested(map)) => map
                .iter()
                .all(|(a, c)| a.nvars() == *m && a.degree() < *dt && base.contains(c) && !base.is_zero(c)),
            _ => false,
        }
    }

    pub fn is_zero(&self, e: &Elem) -> bool {
        match e {
            Elem::Residue(r) => *r == 0,
            Elem::Poly(c) => c.iter().all(|&x| x == 0),
            Elem::Nested(map) => map.is_empty(),
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&*self.inner, a, b) {
            (SpecKind::PAdic { modulus, .. }, Elem::Residue(x), Elem::Residue(y)) => {
                Elem::Residue(((*x as u128 + *y as u128) % *modulus as u128) as u64)
            }
            (SpecKind::EqChar { p, .. }, Elem::Poly(x), Elem::Poly(y)) => {
                Elem::Poly(x.iter().zip(y).map(|(u, v)| (u + v) % p).collect())
            }
            (SpecKind::Nested { base, .. }, Elem::Nested(x), Elem::Nested(y)) => {
                let mut out = x.clone();
                for (mono, c) in y {
                    accumulate(base, &mut out, mono, c);
                }
                Elem::Nested(out)
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&*self.inner, a) {
            (SpecKind::PAdic { modulus, .. }, Elem::Residue(x)) => Elem::Residue(if *x == 0 { 0 } else { modulus - x }),
            (SpecKind::EqChar { p, .. }, Elem::Poly(x)) => {
                Elem::Poly(x.iter().map(|&u| if u == 0 { 0 } else { p - u }).collect())
            }
            (SpecKind::Nested { base, .. }, Elem::Nested(x)) => {
                Elem::Nested(x.iter().map(|(m, c)| (m.clone(), base.neg(c))).collect())
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&*self.inner, a, b) {
            (SpecKind::PAdic { modulus, .. }, Elem::Residue(x), Elem::Residue(y)) => {
                Elem::Residue(((*x as u128 * *y as u128) % *modulus as u128) as u64)
            }
            (SpecKind::EqChar { p, k }, Elem::Poly(x), Elem::Poly(y)) => {
                let k = *k as usize;
                let mut out = vec![0u64; k];
                for (i, &u) in x.iter().enumerate() {
                    if u == 0 {
                        continue;
                    }
                    for (j, &v) in y[..k - i].iter().enumerate() {
                        out[i + j] = (out[i + j] + u * v) % p;
                    }
                }
                Elem::Poly(out)
            }
            (SpecKind::Nested { base, dt, .. }, Elem::Nested(x), Elem::Nested(y)) => {
                let mut acc: BTreeMap<Monomial, Elem> = BTreeMap::new();
                for (ma, ca) in x {
                    for (mb, cb) in y {
                        if ma.degree() + mb.degree() >= *dt {
                            // y is ordered by degree
                            break;
                        }
                        let c = base.mul(ca, cb);
                        accumulate(base, &mut acc, &ma.mul(mb), &c);
                    }
                }
                Elem::Nested(acc)
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn scale_int(&self, a: &Elem, n: i128) -> Elem {
        self.mul(a, &self.from_int(n))
    }

    pub fn pow(&self, a: &Elem, mut n: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
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

    pub fn valuation(&self, a: &Elem) -> Valuation {
        match (&*self.inner, a) {
            (SpecKind::PAdic { p, .. }, Elem::Residue(x)) => {
                if *x == 0 {
                    return Valuation::Infinite;
                }
                let (mut x, mut v) = (*x, 0);
                while x % p == 0 {
                    x /= p;
                    v += 1;
                }
                Valuation::Finite(v)
            }
            (SpecKind::EqChar { .. }, Elem::Poly(c)) => c
                .iter()
                .position(|&u| u != 0)
                .map_or(Valuation::Infinite, |i| Valuation::Finite(i as u32)),
            (SpecKind::Nested { base, .. }, Elem::Nested(map)) => map
                .iter()
                .filter_map(|(m, c)| base.valuation(c).finite().map(|v| v + m.degree()))
                .min()
                .map_or(Valuation::Infinite, Valuation::Finite),
            _ => panic!("element does not belong to {self}"),
        }
    }

    /// Image of `a` in `R / m^level`, as a canonical payload of this ring.
    pub fn reduce_mod_power(&self, a: &Elem, level: u32) -> Elem {
        match (&*self.inner, a) {
            (SpecKind::PAdic { p, k, .. }, Elem::Residue(x)) => {
                if level >= *k {
                    a.clone()
                } else {
                    Elem::Residue(x % p.pow(level))
                }
            }
            (SpecKind::EqChar { .. }, Elem::Poly(c)) => Elem::Poly(
                c.iter()
                    .enumerate()
                    .map(|(i, &u)| if (i as u32) < level { u } else { 0 })
                    .collect(),
            ),
            (SpecKind::Nested { base, .. }, Elem::Nested(map)) => Elem::Nested(
                map.iter()
                    .filter(|(m, _)| m.degree() < level)
                    .map(|(m, c)| (m.clone(), base.reduce_mod_power(c, level - m.degree())))
                    .filter(|(_, c)| !base.is_zero(c))
                    .collect(),
            ),
            _ => panic!("element does not belong to {self}"),
        }
    }

    /// Number of classes in `m^lo / m^hi` (saturating).
    pub fn quotient_size(&self, lo: u32, hi: u32) -> u128 {
        match &*self.inner {
            SpecKind::PAdic { p, k, .. } | SpecKind::EqChar { p, k } => {
                let top = hi.min(*k);
                if lo >= top {
                    1
                } else {
                    (*p as u128).saturating_pow(top - lo)
                }
            }
            SpecKind::Nested { base, m, dt } => {
                let mut size: u128 = 1;
                for mono in monomials_below(*m, (*dt).min(hi)) {
                    let d = mono.degree();
                    size = size.saturating_mul(base.quotient_size(lo.saturating_sub(d), hi - d));
                }
                size
            }
        }
    }

    /// Canonical representatives of `m^lo / m^hi`, in a fixed order.
    pub fn quotient_reps(&self, lo: u32, hi: u32, bound: u128) -> Result<Vec<Elem>> {
        let size = self.quotient_size(lo, hi);
        if size > bound {
            return Err(Error::BoundExceeded { size, bound });
        }
        Ok(match &*self.inner {
            SpecKind::PAdic { p, k, .. } => {
                let top = hi.min(*k);
                if lo >= top {
                    vec![Elem::Residue(0)]
                } else {
                    let step = p.pow(lo);
                    (0..p.pow(top - lo)).map(|j| Elem::Residue(j * step)).collect()
                }
            }
            SpecKind::EqChar { p, k } => {
                let top = hi.min(*k);
                let free = top.saturating_sub(lo) as usize;
                let count = (*p as u128).pow(free as u32) as u64;
                (0..count)
                    .map(|mut j| {
                        let mut c = vec![0u64; *k as usize];
                        for slot in c.iter_mut().skip(lo as usize).take(free) {
                            *slot = j % p;
                            j /= p;
                        }
                        Elem::Poly(c)
                    })
                    .collect()
            }
            SpecKind::Nested { base, m, dt } => {
                let monos = monomials_below(*m, (*dt).min(hi));
                let per: Vec<Vec<Elem>> = monos
                    .iter()
                    .map(|mono| {
                        let d = mono.degree();
                        base.quotient_reps(lo.saturating_sub(d), hi - d, bound)
                    })
                    .collect::<Result<_>>()?;
                let mut out = vec![BTreeMap::new()];
                for (mono, reps) in monos.iter().zip(&per) {
                    let mut next = Vec::with_capacity(out.len() * reps.len());
                    for partial in &out {
                        for r in reps {
                            let mut map: BTreeMap<Monomial, Elem> = partial.clone();
                            if !base.is_zero(r) {
                                map.insert(mono.clone(), r.clone());
                            }
                            next.push(map);
                        }
                    }
                    out = next;
                }
                out.into_iter().map(Elem::Nested).collect()
            }
        })
    }
}

impl RingSpec {
    /// Uniformly random element of `m^level` at full precision.
    pub fn random_in_ideal<R: rand::Rng + ?Sized>(&self, level: u32, rng: &mut R) -> Elem {
        match &*self.inner {
            SpecKind::PAdic { p, k, modulus } => {
                if level >= *k {
                    return Elem::Residue(0);
                }
                Elem::Residue(rng.gen_range(0..p.pow(*k - level)) * p.pow(level) % modulus)
            }
            SpecKind::EqChar { p, k } => Elem::Poly(
                (0..*k)
                    .map(|i| if i < level { 0 } else { rng.gen_range(0..*p) })
                    .collect(),
            ),
            SpecKind::Nested { base, m, dt } => {
                let mut map = BTreeMap::new();
                for mono in monomials_below(*m, *dt) {
                    let c = base.random_in_ideal(level.saturating_sub(mono.degree()), rng);
                    if !base.is_zero(&c) {
                        map.insert(mono, c);
                    }
                }
                Elem::Nested(map)
            }
        }
    }
}

fn accumulate(base: &RingSpec, map: &mut BTreeMap<Monomial, Elem>, mono: &Monomial, c: &Elem) {
    if let Some(slot) = map.get_mut(mono) {
        let s = base.add(slot, c);
        if base.is_zero(&s) {
            map.remove(mono);
        } else {
            *slot = s;
        }
    } else if !base.is_zero(c) {
        map.insert(mono.clone(), c.clone());
    }
}

/// All monomials in `nvars` variables of total degree `< cutoff`, graded-lex.
pub(crate) fn monomials_below(nvars: usize, cutoff: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    fn rec(nvars: usize, i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i == nvars {
            if left == 0 {
                out.push(Monomial::new(cur.clone()));
            }
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e as u16);
            rec(nvars, i + 1, left - e, cur, out);
            cur.pop();
        }
    }
    for d in 0..cutoff {
        rec(nvars, 0, d, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.inner {
            SpecKind::PAdic { p, k, .. } => write!(f, "Z/{p}^{k}"),
            SpecKind::EqChar { p, k } => write!(f, "F_{p}[t]/t^{k}"),
            SpecKind::Nested { base, m, dt } => {
                let vars: Vec<String> = (1..=*m).map(|i| format!("t{i}")).collect();
                write!(f, "({base})[[{}]]/deg{dt}", vars.join(","))
            }
        }
    }
}

/// A ring element bundled with its ring, for checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coefficient {
    spec: RingSpec,
    elem: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl Coefficient {
    pub fn new(spec: RingSpec, elem: Elem) -> Result<Self> {
        if !spec.contains(&elem) {
            return Err(Error::Invalid(format!("payload {elem:?} is not canonical in {spec}")));
        }
        Ok(Coefficient { spec, elem })
    }

    pub fn from_int(spec: &RingSpec, n: i128) -> Self {
        Coefficient {
            elem: spec.from_int(n),
            spec: spec.clone(),
        }
    }

    pub fn parse(spec: &RingSpec, s: &str) -> Result<Self> {
        Ok(Coefficient {
            elem: spec.parse_elem(s)?,
            spec: spec.clone(),
        })
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn elem(&self) -> &Elem {
        &self.elem
    }

    pub fn into_elem(self) -> Elem {
        self.elem
    }

    pub fn is_zero(&self) -> bool {
        self.spec.is_zero(&self.elem)
    }

    pub fn arith(&self, other: &Coefficient, op: ArithOp) -> Result<Coefficient> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch {
                left: self.spec.to_string(),
                right: other.spec.to_string(),
            });
        }
        let elem = match op {
            ArithOp::Add => self.spec.add(&self.elem, &other.elem),
            ArithOp::Sub => self.spec.sub(&self.elem, &other.elem),
            ArithOp::Mul => self.spec.mul(&self.elem, &other.elem),
        };
        Ok(Coefficient {
            spec: self.spec.clone(),
            elem,
        })
    }

    pub fn add(&self, other: &Coefficient) -> Result<Coefficient> {
        self.arith(other, ArithOp::Add)
    }

    pub fn sub(&self, other: &Coefficient) -> Result<Coefficient> {
        self.arith(other, ArithOp::Sub)
    }

    pub fn mul(&self, other: &Coefficient) -> Result<Coefficient> {
        self.arith(other, ArithOp::Mul)
    }

    pub fn valuation(&self) -> Valuation {
        self.spec.valuation(&self.elem)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec.format_elem(&self.elem))
    }
}

/// Sums `c * x^e` style contributions without re-checking canonical form.
pub(crate) fn sum_into(spec: &RingSpec, acc: &mut HashMap<Monomial, Elem>, mono: Monomial, c: Elem) {
    match acc.get_mut(&mono) {
        Some(slot) => *slot = spec.add(slot, &c),
        None => {
            acc.insert(mono, c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn padic(p: u64, k: u32) -> RingSpec {
        RingSpec::p_adic(p, k).unwrap()
    }

    #[test]
    fn padic_arith_examples() {
        let r = padic(3, 2);
        let a = Coefficient::from_int(&r, 7);
        let b = Coefficient::from_int(&r, 5);
        assert_eq!(a.add(&b).unwrap().to_string(), "3");
        let r = padic(2, 3);
        let four = Coefficient::from_int(&r, 4);
        assert!(four.mul(&four).unwrap().is_zero());
    }

    #[test]
    fn eq_char_t_squared() {
        let r = RingSpec::eq_char(2, 3).unwrap();
        let t = Coefficient::new(r.clone(), r.base_t().unwrap()).unwrap();
        let t2 = t.mul(&t).unwrap();
        assert_eq!(t2.elem(), &Elem::Poly(vec![0, 0, 1]));
        assert!(t2.mul(&t).unwrap().is_zero());
    }

    #[test]
    fn spec_mismatch_is_error() {
        let a = Coefficient::from_int(&padic(3, 2), 1);
        let b = Coefficient::from_int(&padic(3, 3), 1);
        assert!(matches!(a.add(&b), Err(Error::SpecMismatch { .. })));
    }

    #[test]
    fn valuation_examples() {
        let r = padic(3, 4);
        assert_eq!(r.valuation(&r.from_int(9)), Valuation::Finite(2));
        assert_eq!(r.valuation(&r.zero()), Valuation::Infinite);
        let e = RingSpec::eq_char(2, 3).unwrap();
        let t = e.base_t().unwrap();
        let x = e.add(&t, &e.mul(&t, &t));
        assert_eq!(e.valuation(&x), Valuation::Finite(1));
        let n = RingSpec::nested(padic(2, 4), 1, 4).unwrap();
        let x = n.mul(&n.from_int(2), &n.t_var(0).unwrap());
        assert_eq!(n.valuation(&x), Valuation::Finite(2));
    }

    #[test]
    fn invalid_specs() {
        assert!(RingSpec::p_adic(4, 2).is_err());
        assert!(RingSpec::p_adic(3, 0).is_err());
        let n = RingSpec::nested(padic(2, 2), 1, 2).unwrap();
        assert!(RingSpec::nested(n, 1, 2).is_err());
        assert!(RingSpec::nested(padic(2, 2), 0, 2).is_err());
    }

    #[test]
    fn nested_truncation_drops_high_t_degree() {
        let n = RingSpec::nested(padic(2, 4), 2, 2).unwrap();
        let t1 = n.t_var(0).unwrap();
        let t2 = n.t_var(1).unwrap();
        assert!(n.is_zero(&n.mul(&t1, &t2)));
    }

    #[test]
    fn quotient_sizes() {
        assert_eq!(padic(2, 5).quotient_size(1, 3), 4);
        assert_eq!(RingSpec::eq_char(3, 4).unwrap().quotient_size(1, 2), 3);
        let n = RingSpec::nested(padic(2, 4), 1, 3).unwrap();
        // m/m^3 over Z_2[[t]]: 2Z/8 at t^0, Z/4 at t^1, Z/2 at t^2
        assert_eq!(n.quotient_size(1, 3), 4 * 4 * 2);
        let reps = n.quotient_reps(1, 3, 1000).unwrap();
        assert_eq!(reps.len(), 32);
        assert!(reps.iter().all(|r| n.valuation(r).at_least(1)));
    }

    #[test]
    fn reduce_mod_power() {
        let r = padic(2, 5);
        assert_eq!(r.reduce_mod_power(&r.from_int(13), 3), Elem::Residue(5));
        let n = RingSpec::nested(padic(2, 4), 1, 4).unwrap();
        let t = n.t_var(0).unwrap();
        let x = n.add(&n.from_int(6), &t);
        // 6 + t mod m^2 = 2 + t
        assert_eq!(n.reduce_mod_power(&x, 2), n.add(&n.from_int(2), &t));
        assert!(n.is_zero(&n.reduce_mod_power(&x, 1)));
    }

    #[test]
    fn random_elements_lie_in_ideal() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let specs = [
            RingSpec::p_adic(3, 4).unwrap(),
            RingSpec::eq_char(2, 5).unwrap(),
            RingSpec::nested(RingSpec::p_adic(2, 3).unwrap(), 2, 3).unwrap(),
        ];
        for spec in &specs {
            for level in 0..4 {
                for _ in 0..20 {
                    let e = spec.random_in_ideal(level, &mut rng);
                    assert!(spec.contains(&e));
                    assert!(spec.valuation(&e).at_least(level));
                }
            }
        }
    }
}
