//! Specialisation grids, the exact kernel test on integer polynomials, and
//! the conciseness probe over a nested coefficient ring.

use std::collections::BTreeMap;
use std::fmt;

use crate::atlas::{
    marginality_check_with, transport_atlas, CosetConstant, Marginality, NonConstantWitness, TransversalData,
};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::ring::{CoeffMap, Coefficient, Elem, RingKind, RingSpec, Specialisation};
use crate::words::{word_power, WordExpr};

/// Canonical maximal-ideal representatives of the base ring, one list per
/// variable combined into all `m`-tuples (first variable slowest).
///
/// `Z/p^K`: `{p*j : 0 <= j < p^(depth-1)}`. `F_p[t]/t^K`: `t*q(t)` with
/// `deg < depth`. Values are reduced at the ring's precision and deduplicated.
pub fn grid(base: &RingSpec, m: usize, depth: u32, bound: u128) -> Result<Vec<Vec<Elem>>> {
    if depth < 1 {
        return Err(Error::Grid("grid depth must be at least 1".into()));
    }
    let p = base.p();
    let count = (p as u128).checked_pow(depth - 1).unwrap_or(u128::MAX);
    if count > bound {
        return Err(Error::BoundExceeded { size: count, bound });
    }
    let mut axis: Vec<Elem> = Vec::new();
    for j in 0..count as u64 {
        let e = match base.kind() {
            RingKind::PAdic => base.scale_int(&base.from_int(p as i128), j as i128),
            RingKind::EqChar => {
                let mut c = vec![0u64; base.precision() as usize];
                let mut rest = j;
                for slot in c.iter_mut().skip(1) {
                    *slot = rest % p;
                    rest /= p;
                }
                Elem::Poly(c)
            }
            RingKind::Nested => {
                return Err(Error::InvalidSpec(
                    "grid points live in a p-adic or eq-char base".into(),
                ))
            }
        };
        if !axis.contains(&e) {
            axis.push(e);
        }
    }
    let size = (0..m).fold(1u128, |acc, _| acc.saturating_mul(axis.len() as u128));
    if size > bound {
        return Err(Error::BoundExceeded { size, bound });
    }
    let mut points = vec![Vec::new()];
    for _ in 0..m {
        points = points
            .into_iter()
            .flat_map(|prefix: Vec<Elem>| {
                axis.iter().map(move |a| {
                    let mut v = prefix.clone();
                    v.push(a.clone());
                    v
                })
            })
            .collect();
    }
    Ok(points)
}

/// A polynomial in `t1..tm` with exact integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExactPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, i128>,
}

impl ExactPoly {
    pub fn zero(nvars: usize) -> Self {
        ExactPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, i128)>) -> Result<Self> {
        let mut p = ExactPoly::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Shape(format!(
                    "exponent vector of length {} in {nvars} variables",
                    e.len()
                )));
            }
            let slot = p.terms.entry(e).or_insert(0);
            *slot = slot
                .checked_add(c)
                .ok_or_else(|| Error::Invalid("coefficient overflow".into()))?;
        }
        p.terms.retain(|_, c| *c != 0);
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, i128> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree in variable `i`; `None` for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn eval(&self, point: &[i128]) -> Result<i128> {
        if point.len() != self.nvars {
            return Err(Error::Shape("point has the wrong number of coordinates".into()));
        }
        let overflow = || Error::Invalid("evaluation overflows i128".into());
        let mut acc: i128 = 0;
        for (e, c) in &self.terms {
            let mut term = *c;
            for (x, &k) in point.iter().zip(e) {
                term = term
                    .checked_mul(x.checked_pow(k).ok_or_else(overflow)?)
                    .ok_or_else(overflow)?;
            }
            acc = acc.checked_add(term).ok_or_else(overflow)?;
        }
        Ok(acc)
    }
}

impl TryFrom<&Coefficient> for ExactPoly {
    type Error = Error;

    /// Truncated coefficients do not determine an exact polynomial.
    fn try_from(c: &Coefficient) -> Result<Self> {
        Err(Error::ExactRepresentationRequired(format!(
            "{} is a truncated element of {}",
            c,
            c.spec()
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelVerdict {
    Zero,
    NonZero { witness: Vec<i128>, value: i128 },
}

/// Decides `c = 0` by evaluation on the product grid `axes[0] x .. x axes[m-1]`.
/// Requires more distinct values on each axis than the degree of `c` in that
/// variable, so that vanishing on the grid forces `c = 0`.
pub fn kernel_grid_test(c: &ExactPoly, axes: &[Vec<i128>]) -> Result<KernelVerdict> {
    if axes.len() != c.nvars() {
        return Err(Error::Grid(format!("{} axes for {} variables", axes.len(), c.nvars())));
    }
    for (i, axis) in axes.iter().enumerate() {
        let mut distinct = axis.clone();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != axis.len() {
            return Err(Error::Grid(format!("axis {} repeats a value", i + 1)));
        }
        if let Some(deg) = c.degree_in(i) {
            if axis.len() as u32 <= deg {
                return Err(Error::Grid(format!(
                    "t{} has degree {deg} but the grid has only {} values",
                    i + 1,
                    axis.len()
                )));
            }
        }
    }
    let total: usize = axes.iter().map(Vec::len).product();
    let mut point = vec![0i128; axes.len()];
    for mut idx in 0..total {
        for (slot, axis) in point.iter_mut().zip(axes).rev() {
            *slot = axis[idx % axis.len()];
            idx /= axis.len();
        }
        let value = c.eval(&point)?;
        if value != 0 {
            return Ok(KernelVerdict::NonZero {
                witness: point.clone(),
                value,
            });
        }
    }
    Ok(KernelVerdict::Zero)
}

/// How a constant behaves under specialisation at the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstantClass {
    /// Zero in the nested ring itself.
    SymbolicZero,
    /// Non-zero, yet every grid specialisation vanishes at this precision.
    GridVanishingOnly,
    NonZero,
}

impl ConstantClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstantClass::SymbolicZero => "symbolic-zero",
            ConstantClass::GridVanishingOnly => "grid-vanishing-only",
            ConstantClass::NonZero => "non-zero",
        }
    }
}

impl fmt::Display for ConstantClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialisedConstants {
    /// `s_a(c)` for each grid point, in grid order.
    pub values: Vec<Vec<Elem>>,
    pub class: ConstantClass,
}

fn specialisations(spec: &RingSpec, grid: &[Vec<Elem>]) -> Result<Vec<Specialisation>> {
    grid.iter().map(|a| Specialisation::new(spec, a.clone())).collect()
}

/// `s_a(c)` for every grid point `a`, with the vanishing classification.
pub fn specialise_probe_constants(spec: &RingSpec, c: &[Elem], grid: &[Vec<Elem>]) -> Result<SpecialisedConstants> {
    let maps = specialisations(spec, grid)?;
    Ok(classify(spec, &[c.to_vec()], &maps).0.remove(0))
}

fn classify(
    spec: &RingSpec,
    constants: &[Vec<Elem>],
    maps: &[Specialisation],
) -> (Vec<SpecialisedConstants>, ConstantClass) {
    let mut overall = ConstantClass::SymbolicZero;
    let per: Vec<SpecialisedConstants> = constants
        .iter()
        .map(|c| {
            let values: Vec<Vec<Elem>> = maps.iter().map(|s| c.iter().map(|x| s.apply(x)).collect()).collect();
            let class = if c.iter().all(|x| spec.is_zero(x)) {
                ConstantClass::SymbolicZero
            } else if maps
                .iter()
                .zip(&values)
                .all(|(s, v)| v.iter().all(|x| s.target().is_zero(x)))
            {
                ConstantClass::GridVanishingOnly
            } else {
                ConstantClass::NonZero
            };
            overall = overall.max(class);
            SpecialisedConstants { values, class }
        })
        .collect();
    (per, overall)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelStatus {
    /// Some coset tuple gives a non-constant word series.
    NonConstant(NonConstantWitness),
    Constant(ConstantLevel),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantLevel {
    pub entries: Vec<CosetConstant>,
    /// Worst class over all coset tuples.
    pub class: ConstantClass,
    /// All target cosets are the identity.
    pub identity_targets: bool,
    /// Indices of grid points `a` with `w^l` trivial after `s_a`.
    pub members: Vec<usize>,
    /// Per grid point: transporting the data by `s_a` and recomputing the
    /// constants reproduces `s_a` of the stored constants.
    pub coherent: Vec<bool>,
}

impl ConstantLevel {
    /// `w^l` is the identity on every coset tuple at this precision.
    pub fn is_law(&self) -> bool {
        self.identity_targets && self.class == ConstantClass::SymbolicZero
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeLevel {
    pub l: u32,
    pub status: LevelStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub word: WordExpr,
    pub lmax: u32,
    pub levels: Vec<ProbeLevel>,
    pub grid: Vec<Vec<Elem>>,
    /// Least `l` whose level is a law, if any up to `lmax`.
    pub min_l: Option<u32>,
}

impl ProbeReport {
    /// Every constant level agrees with its transported recomputation.
    pub fn coherent(&self) -> bool {
        self.levels.iter().all(|lv| match &lv.status {
            LevelStatus::Constant(c) => c.coherent.iter().all(|&b| b),
            LevelStatus::NonConstant(_) => true,
        })
    }

    /// If `w^l` is a law then so is `w^(lj)` for every recorded multiple.
    pub fn is_monotone(&self) -> bool {
        let law = |l: u32| {
            self.levels
                .iter()
                .find(|lv| lv.l == l)
                .map(|lv| matches!(&lv.status, LevelStatus::Constant(c) if c.is_law()))
        };
        (1..=self.lmax).all(|l| law(l) != Some(true) || (2..=self.lmax / l).all(|j| law(l * j) != Some(false)))
    }
}

/// For `l = 1..lmax`: the marginality check of `w^l` on `data`, its
/// constants specialised at every grid point, and the coherence of those
/// values with the transported data.
pub fn concision_probe(
    w: &WordExpr,
    data: &TransversalData,
    lmax: u32,
    grid: &[Vec<Elem>],
    bound: u128,
) -> Result<ProbeReport> {
    concision_probe_with(w, data, lmax, grid, bound, Execution::default())
}

pub fn concision_probe_with(
    w: &WordExpr,
    data: &TransversalData,
    lmax: u32,
    grid: &[Vec<Elem>],
    bound: u128,
    exec: Execution,
) -> Result<ProbeReport> {
    if lmax < 1 {
        return Err(Error::Invalid("lmax must be at least 1".into()));
    }
    let spec = data.group().spec().clone();
    if spec.kind() != RingKind::Nested {
        return Err(Error::InvalidSpec(format!(
            "the probe needs a nested coefficient ring, got {spec}"
        )));
    }
    let maps = specialisations(&spec, grid)?;
    let transported: Vec<TransversalData> =
        par::map_slice(exec, &maps, |s| transport_atlas(data, &CoeffMap::Specialise(s.clone())))
            .into_iter()
            .collect::<Result<_>>()?;
    let id = data.transversal().identity();
    let mut levels = Vec::new();
    let mut min_l = None;
    for l in 1..=lmax {
        let wl = word_power(w, l)?;
        let status = match marginality_check_with(&wl, data, bound, exec)? {
            Marginality::NonConstant(witness) => LevelStatus::NonConstant(witness),
            Marginality::Constant { entries, .. } => {
                let constants: Vec<Vec<Elem>> = entries.iter().map(|e| e.constant.clone()).collect();
                let (per, class) = classify(&spec, &constants, &maps);
                let identity_targets = entries.iter().all(|e| e.target == id);
                let members = (0..maps.len())
                    .filter(|&g| {
                        identity_targets
                            && per
                                .iter()
                                .all(|sc| sc.values[g].iter().all(|x| maps[g].target().is_zero(x)))
                    })
                    .collect();
                let checks = par::map_range(exec, maps.len(), |g| {
                    marginality_check_with(&wl, &transported[g], bound, Execution::Sequential).map(|m| match m {
                        Marginality::Constant { entries: moved, .. } => {
                            moved.len() == entries.len()
                                && moved.iter().zip(&per).zip(&entries).all(|((mv, sc), e)| {
                                    mv.cosets == e.cosets && mv.target == e.target && mv.constant == sc.values[g]
                                })
                        }
                        Marginality::NonConstant(_) => false,
                    })
                });
                let coherent = checks.into_iter().collect::<Result<Vec<_>>>()?;
                let level = ConstantLevel {
                    entries,
                    class,
                    identity_targets,
                    members,
                    coherent,
                };
                if min_l.is_none() && level.is_law() {
                    min_l = Some(l);
                }
                LevelStatus::Constant(level)
            }
        };
        levels.push(ProbeLevel { l, status });
    }
    Ok(ProbeReport {
        word: w.clone(),
        lmax,
        levels,
        grid: grid.to_vec(),
        min_l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::builtin_extension;
    use crate::fgl::{builtin_fgl, BuiltinLaw};
    use crate::stdgrp::StandardGroup;
    use crate::words::parse_word;

    #[test]
    fn grid_examples() {
        let z2 = RingSpec::p_adic(2, 3).unwrap();
        assert_eq!(
            grid(&z2, 1, 2, 100).unwrap(),
            vec![vec![Elem::Residue(0)], vec![Elem::Residue(2)]]
        );
        assert_eq!(
            grid(&z2, 2, 1, 100).unwrap(),
            vec![vec![Elem::Residue(0), Elem::Residue(0)]]
        );
        let f2 = RingSpec::eq_char(2, 3).unwrap();
        let g = grid(&f2, 1, 2, 100).unwrap();
        assert_eq!(g, vec![vec![f2.zero()], vec![f2.base_t().unwrap()]]);
        assert_eq!(grid(&z2, 2, 3, 100).unwrap().len(), 16);
        assert!(grid(&z2, 2, 3, 10).is_err());
        // 2*j mod 8 repeats once j reaches 4
        assert_eq!(grid(&z2, 1, 4, 100).unwrap().len(), 4);
    }

    #[test]
    fn kernel_examples() {
        let axes = vec![vec![0, 1], vec![0, 1]];
        assert_eq!(
            kernel_grid_test(&ExactPoly::zero(2), &axes).unwrap(),
            KernelVerdict::Zero
        );
        let t1t2 = ExactPoly::from_terms(2, [(vec![1, 1], 1)]).unwrap();
        assert_eq!(
            kernel_grid_test(&t1t2, &axes).unwrap(),
            KernelVerdict::NonZero {
                witness: vec![1, 1],
                value: 1
            }
        );
        let guard = ExactPoly::from_terms(1, [(vec![2], 1), (vec![1], -1)]).unwrap();
        assert!(matches!(kernel_grid_test(&guard, &[vec![0, 1]]), Err(Error::Grid(_))));
        assert_eq!(
            kernel_grid_test(&guard, &[vec![0, 1, 2]]).unwrap(),
            KernelVerdict::NonZero {
                witness: vec![2],
                value: 2
            }
        );
        let spec = RingSpec::p_adic(2, 2).unwrap();
        let c = Coefficient::from_int(&spec, 2);
        assert!(matches!(
            ExactPoly::try_from(&c),
            Err(Error::ExactRepresentationRequired(_))
        ));
    }

    #[test]
    fn specialised_constants() {
        let z2 = RingSpec::p_adic(2, 3).unwrap();
        let r = RingSpec::nested(z2.clone(), 1, 3).unwrap();
        let g = grid(&z2, 1, 2, 10).unwrap();
        let zero = specialise_probe_constants(&r, &[r.zero()], &g).unwrap();
        assert_eq!(zero.class, ConstantClass::SymbolicZero);
        let t1 = r.t_var(0).unwrap();
        let sc = specialise_probe_constants(&r, &[t1], &g).unwrap();
        assert_eq!(sc.values, vec![vec![Elem::Residue(0)], vec![Elem::Residue(2)]]);
        assert_eq!(sc.class, ConstantClass::NonZero);

        let z4 = RingSpec::p_adic(2, 2).unwrap();
        let r = RingSpec::nested(z4.clone(), 1, 2).unwrap();
        let c = r.scale_int(&r.t_var(0).unwrap(), 2);
        let sc = specialise_probe_constants(&r, &[c], &grid(&z4, 1, 2, 10).unwrap()).unwrap();
        assert_eq!(sc.values, vec![vec![Elem::Residue(0)], vec![Elem::Residue(0)]]);
        assert_eq!(sc.class, ConstantClass::GridVanishingOnly);
    }

    fn probe(base: RingSpec, ext: &str, word: &str, lmax: u32) -> ProbeReport {
        let r = RingSpec::nested(base.clone(), 1, base.precision()).unwrap();
        let g = StandardGroup::new(builtin_fgl(BuiltinLaw::Additive(1), &r, 4).unwrap(), 1).unwrap();
        let data = builtin_extension(&ext.parse().unwrap(), g).unwrap();
        let pts = grid(&base, 1, 2, 100).unwrap();
        concision_probe(&parse_word(word).unwrap(), &data, lmax, &pts, 1 << 20).unwrap()
    }

    #[test]
    fn probe_examples() {
        let f2 = RingSpec::eq_char(2, 3).unwrap();
        let rep = probe(f2.clone(), "c2-trivial", "[x1,x2]", 2);
        assert_eq!(rep.min_l, Some(1));
        assert!(rep.coherent() && rep.is_monotone());

        let rep = probe(f2, "c2-inverse", "x1^2", 3);
        assert_eq!(rep.min_l, Some(1));
        assert!(rep.coherent() && rep.is_monotone());

        let z3 = RingSpec::p_adic(3, 3).unwrap();
        let rep = probe(z3, "c2-inverse", "x1^2", 3);
        assert_eq!(rep.min_l, None);
        assert!(rep
            .levels
            .iter()
            .all(|lv| matches!(&lv.status, LevelStatus::NonConstant(w) if w.cosets == vec![0])));
    }
}
