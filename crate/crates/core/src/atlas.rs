//! The transversal-extension group `H = T x L`: a finite transversal `T`
//! with its coset multiplication table, conjugation series `C_t` and
//! correction series `A` acting on a standard group `L`.
//!
//! Multiplication is `(t, l)(r, m) = (tr, A_{t,r}(F(C_r(l), m)))` and the
//! inverse is `(t, l)^-1 = (t^-1, A_{t^-1}(C_{t^-1}(I(l))))`, where a missing
//! correction means the identity series.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Group, TableDefect, TableGroup};
use crate::mono::Monomial;
use crate::par::{self, Execution};
use crate::ring::{CoeffMap, Elem};
use crate::series::{Constancy, Series, SeriesTuple};
use crate::stdgrp::{GroupElement, StandardGroup};
use crate::words::{WordExpr, WordSeries};

/// Seed used by sampled validation when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Number of random triples in the default sampled validation.
pub const DEFAULT_SAMPLES: usize = 1000;

/// A finite set of named coset representatives with a group table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversal {
    names: Vec<String>,
    table: TableGroup,
}

impl Transversal {
    /// Checks shape and names only; the group axioms are checked by
    /// [`Transversal::check`] and during validation.
    pub fn new(names: Vec<String>, mul: Vec<Vec<usize>>, inv: Vec<usize>, identity: usize) -> Result<Self> {
        if names.len() != mul.len() {
            return Err(Error::Transversal(format!(
                "{} names for a table of size {}",
                names.len(),
                mul.len()
            )));
        }
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() || names.iter().any(|n| n.is_empty() || n.contains(',')) {
            return Err(Error::Transversal(
                "names must be distinct, non-empty and comma-free".into(),
            ));
        }
        let table = TableGroup::new(mul, inv, identity)?;
        Ok(Transversal { names, table })
    }

    /// `{1, s, s^2, ..}` with `s^n = 1`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Transversal("cyclic transversal needs n >= 1".into()));
        }
        let names = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "s".to_string(),
                _ => format!("s^{i}"),
            })
            .collect();
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inv = (0..n).map(|a| (n - a) % n).collect();
        Transversal::new(names, mul, inv, 0)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, t: usize) -> &str {
        &self.names[t]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name.trim())
            .ok_or_else(|| Error::Unknown(format!("no transversal element named '{}'", name.trim())))
    }

    pub fn identity(&self) -> usize {
        self.table.identity()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table.mul(&a, &b)
    }

    pub fn inv(&self, a: usize) -> usize {
        self.table.inv(&a)
    }

    pub fn table(&self) -> &TableGroup {
        &self.table
    }

    pub fn check(&self) -> Option<TableDefect> {
        self.table.check()
    }
}

/// Which correction series: after a product `t*r`, or after inverting `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CorrectionKey {
    Mul(usize, usize),
    Inv(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalData {
    group: StandardGroup,
    transversal: Transversal,
    conj: Vec<SeriesTuple>,
    corrections: BTreeMap<CorrectionKey, SeriesTuple>,
    split: bool,
    conj_trivial: Vec<bool>,
}

/// An element `(t, l)` of `H`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HElement {
    pub coset: usize,
    pub l: GroupElement,
}

impl TransversalData {
    /// General data; only shapes and constant terms are checked here.
    pub fn new(
        group: StandardGroup,
        transversal: Transversal,
        conj: Vec<SeriesTuple>,
        corrections: BTreeMap<CorrectionKey, SeriesTuple>,
        split: bool,
    ) -> Result<Self> {
        if conj.len() != transversal.len() {
            return Err(Error::Transversal(format!(
                "{} conjugation series for {} cosets",
                conj.len(),
                transversal.len()
            )));
        }
        let identity = group.identity_series();
        let check = |what: String, s: &SeriesTuple| -> Result<()> {
            if s.len() != group.dim()
                || s.nvars() != group.dim()
                || s.spec() != group.spec()
                || s.cutoff() != group.law().cutoff()
            {
                return Err(Error::Transversal(format!("{what} does not match the shape of L")));
            }
            if !s.has_zero_constant() {
                return Err(Error::Transversal(format!("{what} has a non-zero constant term")));
            }
            Ok(())
        };
        for (t, c) in conj.iter().enumerate() {
            check(format!("C_{}", transversal.name(t)), c)?;
        }
        for (key, a) in &corrections {
            let in_range = match *key {
                CorrectionKey::Mul(t, r) => t < transversal.len() && r < transversal.len(),
                CorrectionKey::Inv(t) => t < transversal.len(),
            };
            if !in_range {
                return Err(Error::Transversal("correction key out of range".into()));
            }
            check("a correction series".into(), a)?;
            if split && *a != identity {
                return Err(Error::Transversal(
                    "split data must not carry non-identity corrections".into(),
                ));
            }
        }
        let corrections = corrections.into_iter().filter(|(_, a)| *a != identity).collect();
        let conj_trivial = conj.iter().map(|c| *c == identity).collect();
        Ok(TransversalData {
            group,
            transversal,
            conj,
            corrections,
            split,
            conj_trivial,
        })
    }

    pub fn group(&self) -> &StandardGroup {
        &self.group
    }

    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }

    pub fn conj(&self) -> &[SeriesTuple] {
        &self.conj
    }

    pub fn corrections(&self) -> &BTreeMap<CorrectionKey, SeriesTuple> {
        &self.corrections
    }

    pub fn is_split(&self) -> bool {
        self.split
    }

    pub fn element(&self, coset: usize, l: GroupElement) -> Result<HElement> {
        if coset >= self.transversal.len() {
            return Err(Error::Invalid(format!("coset index {coset} out of range")));
        }
        let l = self.group.element(l.into_coords())?;
        Ok(HElement { coset, l })
    }

    pub fn parse_element(&self, coset: &str, coords: &[&str]) -> Result<HElement> {
        let t = self.transversal.index_of(coset)?;
        Ok(HElement {
            coset: t,
            l: self.group.parse_element(coords)?,
        })
    }

    pub fn render(&self, x: &HElement) -> String {
        format!(
            "({}, {})",
            self.transversal.name(x.coset),
            x.l.render(self.group.spec())
        )
    }

    fn apply_conj(&self, t: usize, l: &[Elem]) -> Vec<Elem> {
        if self.conj_trivial[t] {
            l.to_vec()
        } else {
            self.conj[t].eval(l).expect("coordinates lie in the maximal ideal")
        }
    }

    fn apply_correction(&self, key: CorrectionKey, l: Vec<Elem>) -> Vec<Elem> {
        match self.corrections.get(&key) {
            Some(a) => a.eval(&l).expect("coordinates lie in the maximal ideal"),
            None => l,
        }
    }

    pub fn h_mul(&self, x: &HElement, y: &HElement) -> HElement {
        let mut args = self.apply_conj(y.coset, x.l.coords());
        args.extend(y.l.coords().iter().cloned());
        let l = self
            .group
            .law()
            .law()
            .eval(&args)
            .expect("coordinates lie in the maximal ideal");
        let l = self.apply_correction(CorrectionKey::Mul(x.coset, y.coset), l);
        HElement {
            coset: self.transversal.mul(x.coset, y.coset),
            l: GroupElement::from_raw(l),
        }
    }

    pub fn h_inv(&self, x: &HElement) -> HElement {
        let ti = self.transversal.inv(x.coset);
        let il = self
            .group
            .law()
            .inverse()
            .eval(x.l.coords())
            .expect("coordinates lie in the maximal ideal");
        let l = self.apply_correction(CorrectionKey::Inv(x.coset), self.apply_conj(ti, &il));
        HElement {
            coset: ti,
            l: GroupElement::from_raw(l),
        }
    }

    /// `T x (m^N / m^M)^d` with the induced operation.
    pub fn quotient(&self, level_m: u32, bound: u128) -> Result<HQuotient> {
        let size = self.quotient_size(level_m);
        if size > bound {
            return Err(Error::BoundExceeded { size, bound });
        }
        let lq = self.group.quotient(level_m, bound)?;
        let elements = (0..self.transversal.len())
            .flat_map(|t| lq.elements().iter().map(move |l| HElement { coset: t, l: l.clone() }))
            .collect();
        Ok(HQuotient {
            data: self.clone(),
            level_m,
            elements,
        })
    }

    pub fn quotient_size(&self, level_m: u32) -> u128 {
        (self.transversal.len() as u128).saturating_mul(self.group.quotient_size(level_m))
    }

    pub fn random_element<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> HElement {
        HElement {
            coset: rng.gen_range(0..self.transversal.len()),
            l: self.group.random_element(rng),
        }
    }
}

impl Group for TransversalData {
    type Element = HElement;

    fn identity(&self) -> HElement {
        HElement {
            coset: self.transversal.identity(),
            l: self.group.identity(),
        }
    }

    fn mul(&self, a: &HElement, b: &HElement) -> HElement {
        self.h_mul(a, b)
    }

    fn inv(&self, a: &HElement) -> HElement {
        self.h_inv(a)
    }
}

/// `H` modulo `(1, L_M)`.
#[derive(Clone, Debug)]
pub struct HQuotient {
    data: TransversalData,
    level_m: u32,
    elements: Vec<HElement>,
}

impl HQuotient {
    pub fn data(&self) -> &TransversalData {
        &self.data
    }

    pub fn level_m(&self) -> u32 {
        self.level_m
    }

    pub fn reduce(&self, x: &HElement) -> HElement {
        HElement {
            coset: x.coset,
            l: self.data.group.reduce(&x.l, self.level_m),
        }
    }
}

impl Group for HQuotient {
    type Element = HElement;

    fn identity(&self) -> HElement {
        self.data.identity()
    }

    fn mul(&self, a: &HElement, b: &HElement) -> HElement {
        self.reduce(&self.data.h_mul(a, b))
    }

    fn inv(&self, a: &HElement) -> HElement {
        self.reduce(&self.data.h_inv(a))
    }
}

impl FiniteGroup for HQuotient {
    fn elements(&self) -> &[HElement] {
        &self.elements
    }
}

fn witness_text(s: &SeriesTuple, other: &SeriesTuple) -> String {
    match s.first_difference(other) {
        Ok(Some((c, m))) => format!("component {}, monomial {}", c + 1, m),
        _ => "shape mismatch".into(),
    }
}

/// Split data from an action `t -> C_t`. Each `C_t` must be an endomorphism
/// of the law, `C_1 = X` and `C_{tr} = C_r o C_t`.
pub fn mk_split_extension(
    group: StandardGroup,
    transversal: Transversal,
    action: Vec<SeriesTuple>,
) -> Result<TransversalData> {
    if let Some(defect) = transversal.check() {
        return Err(Error::Transversal(format!("coset table is not a group: {defect:?}")));
    }
    let data = TransversalData::new(group, transversal, action, BTreeMap::new(), true)?;
    match action_defect(&data)? {
        Some(msg) => Err(Error::Transversal(msg)),
        None => Ok(data),
    }
}

/// First way in which `t -> C_t` fails to be an action by automorphisms of
/// the law, checked symbolically.
pub fn action_defect(data: &TransversalData) -> Result<Option<String>> {
    let law = data.group.law();
    let d = data.group.dim();
    let spec = data.group.spec();
    let cut = law.cutoff();
    let vars = SeriesTuple::identity(spec, 2 * d, cut);
    let x = SeriesTuple::new(vars.components()[..d].to_vec())?;
    let y = SeriesTuple::new(vars.components()[d..].to_vec())?;
    let t_names = data.transversal.names();
    let identity = data.group.identity_series();
    let e = data.transversal.identity();
    if data.conj[e] != identity {
        return Ok(Some(format!(
            "C_{} must be the identity series ({})",
            t_names[e],
            witness_text(&data.conj[e], &identity)
        )));
    }
    for (t, c) in data.conj.iter().enumerate() {
        let lhs = c.compose(law.law())?;
        let rhs = law.combine(&c.compose(&x)?, &c.compose(&y)?)?;
        if lhs != rhs {
            return Ok(Some(format!(
                "C_{} is not an endomorphism of the law: {}",
                t_names[t],
                witness_text(&lhs, &rhs)
            )));
        }
    }
    let n = data.transversal.len();
    for t in 0..n {
        for r in 0..n {
            let tr = data.transversal.mul(t, r);
            let composed = data.conj[r].compose(&data.conj[t])?;
            if composed != data.conj[tr] {
                return Ok(Some(format!(
                    "C_{} differs from C_{} o C_{}: {}",
                    t_names[tr],
                    t_names[r],
                    t_names[t],
                    witness_text(&composed, &data.conj[tr])
                )));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationMode {
    /// Every triple of `T x (m^N / m^M)^d`.
    Exhaustive { level_m: u32 },
    /// Random triples at full precision.
    Sampled { samples: usize, seed: u64 },
}

impl ValidationMode {
    /// Exhaustive at `M = N + 2` when the number of triples fits `bound`,
    /// else [`DEFAULT_SAMPLES`] random triples.
    pub fn default_for(data: &TransversalData, bound: u128) -> Self {
        let level_m = data.group.level() + 2;
        let n = data.quotient_size(level_m);
        if n.saturating_mul(n).saturating_mul(n) <= bound {
            ValidationMode::Exhaustive { level_m }
        } else {
            ValidationMode::Sampled {
                samples: DEFAULT_SAMPLES,
                seed: DEFAULT_SEED,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomFailure {
    /// The coset table itself is not a group.
    Table(TableDefect),
    Identity {
        x: HElement,
    },
    Inverse {
        x: HElement,
    },
    Associativity {
        x: HElement,
        y: HElement,
        z: HElement,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    /// Elements (exhaustive) or samples checked.
    pub elements: usize,
    pub failure: Option<AxiomFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks identity, inverse and associativity of `H` pointwise.
pub fn validate_transversal(data: &TransversalData, mode: ValidationMode, bound: u128) -> Result<ValidationReport> {
    validate_transversal_with(data, mode, bound, Execution::default())
}

pub fn validate_transversal_with(
    data: &TransversalData,
    mode: ValidationMode,
    bound: u128,
    exec: Execution,
) -> Result<ValidationReport> {
    if let Some(defect) = data.transversal.check() {
        return Ok(ValidationReport {
            mode,
            elements: 0,
            failure: Some(AxiomFailure::Table(defect)),
        });
    }
    match mode {
        ValidationMode::Exhaustive { level_m } => {
            let n = data.quotient_size(level_m);
            let triples = n.saturating_mul(n).saturating_mul(n);
            if triples > bound {
                return Err(Error::BoundExceeded { size: triples, bound });
            }
            let q = data.quotient(level_m, bound)?;
            let elems = q.elements();
            let table = TableGroup::from_finite_with(&q, exec);
            let failure = table.check_with(exec).map(|defect| match defect {
                TableDefect::Identity { element } => AxiomFailure::Identity {
                    x: elems[element].clone(),
                },
                TableDefect::Inverse { element } => AxiomFailure::Inverse {
                    x: elems[element].clone(),
                },
                TableDefect::Associativity { a, b, c } => AxiomFailure::Associativity {
                    x: elems[a].clone(),
                    y: elems[b].clone(),
                    z: elems[c].clone(),
                },
                TableDefect::Shape(s) => AxiomFailure::Table(TableDefect::Shape(s)),
            });
            Ok(ValidationReport {
                mode,
                elements: elems.len(),
                failure,
            })
        }
        ValidationMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let triples: Vec<[HElement; 3]> = (0..samples)
                .map(|_| {
                    [
                        data.random_element(&mut rng),
                        data.random_element(&mut rng),
                        data.random_element(&mut rng),
                    ]
                })
                .collect();
            let e = data.identity();
            let failure = par::find_first(exec, triples.len(), |i| {
                let [x, y, z] = &triples[i];
                if data.h_mul(&e, x) != *x || data.h_mul(x, &e) != *x {
                    return Some(AxiomFailure::Identity { x: x.clone() });
                }
                let xi = data.h_inv(x);
                if data.h_mul(x, &xi) != e || data.h_mul(&xi, x) != e {
                    return Some(AxiomFailure::Inverse { x: x.clone() });
                }
                let lhs = data.h_mul(&data.h_mul(x, y), z);
                let rhs = data.h_mul(x, &data.h_mul(y, z));
                (lhs != rhs).then(|| AxiomFailure::Associativity {
                    x: x.clone(),
                    y: y.clone(),
                    z: z.clone(),
                })
            });
            Ok(ValidationReport {
                mode,
                elements: samples,
                failure,
            })
        }
    }
}

/// Word map restricted to `t1 L x .. x tk L`, with the coset of its values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetWordSeries {
    pub cosets: Vec<usize>,
    pub target: usize,
    pub series: WordSeries,
}

/// Folds the letters of `w` through the extension's product symbolically.
/// Block `i` of the `d*k` variables holds the `L`-coordinates of argument `i`.
pub fn coset_word_series(w: &WordExpr, data: &TransversalData, cosets: &[usize]) -> Result<CosetWordSeries> {
    let k = w.k();
    if cosets.len() != k {
        return Err(Error::Shape(format!(
            "word in {k} variables given {} cosets",
            cosets.len()
        )));
    }
    if let Some(&bad) = cosets.iter().find(|&&t| t >= data.transversal.len()) {
        return Err(Error::Invalid(format!("coset index {bad} out of range")));
    }
    let law = data.group.law();
    let d = law.dim();
    let n = d * k;
    let spec = law.spec();
    let cut = law.cutoff();
    let tv = &data.transversal;
    let vars = SeriesTuple::identity(spec, n, cut);
    let mut letters: Vec<Option<(usize, SeriesTuple)>> = vec![None; 2 * k];
    let mut operand = |i: usize, inverse: bool| -> Result<(usize, SeriesTuple)> {
        let slot = 2 * i + inverse as usize;
        if let Some(v) = &letters[slot] {
            return Ok(v.clone());
        }
        let block = SeriesTuple::new(vars.components()[d * i..d * (i + 1)].to_vec())?;
        let value = if inverse {
            let t = cosets[i];
            let ti = tv.inv(t);
            let il = law.invert(&block)?;
            let mut l = if data.conj_trivial[ti] {
                il
            } else {
                data.conj[ti].compose(&il)?
            };
            if let Some(a) = data.corrections.get(&CorrectionKey::Inv(t)) {
                l = a.compose(&l)?;
            }
            (ti, l)
        } else {
            (cosets[i], block)
        };
        letters[slot] = Some(value.clone());
        Ok(value)
    };
    let mut g = tv.identity();
    let mut v = SeriesTuple::zero(spec, d, n, cut);
    for letter in w.letters() {
        let (r, m) = operand(letter.generator, letter.inverse)?;
        let mut next = if v.is_zero() {
            m
        } else {
            let cv = if data.conj_trivial[r] {
                v
            } else {
                data.conj[r].compose(&v)?
            };
            law.combine(&cv, &m)?
        };
        if let Some(a) = data.corrections.get(&CorrectionKey::Mul(g, r)) {
            next = a.compose(&next)?;
        }
        g = tv.mul(g, r);
        v = next;
    }
    Ok(CosetWordSeries {
        cosets: cosets.to_vec(),
        target: g,
        series: WordSeries {
            word: w.clone(),
            dim: d,
            series: v,
        },
    })
}

/// Constant value of the word map on one tuple of cosets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetConstant {
    pub cosets: Vec<usize>,
    pub target: usize,
    pub constant: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonConstantWitness {
    pub cosets: Vec<usize>,
    pub target: usize,
    pub component: usize,
    pub monomial: Monomial,
    pub coefficient: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Marginality {
    /// Every coset tuple gives a constant; `|w{H}| <= image_bound`.
    Constant {
        entries: Vec<CosetConstant>,
        image_bound: u128,
    },
    NonConstant(NonConstantWitness),
}

impl Marginality {
    pub fn is_constant(&self) -> bool {
        matches!(self, Marginality::Constant { .. })
    }

    /// True when every coset tuple maps to the identity `(1, 0)`.
    pub fn is_trivial(&self, data: &TransversalData) -> bool {
        let spec = data.group.spec();
        match self {
            Marginality::Constant { entries, .. } => entries
                .iter()
                .all(|e| e.target == data.transversal.identity() && e.constant.iter().all(|c| spec.is_zero(c))),
            Marginality::NonConstant(_) => false,
        }
    }
}

/// Runs [`coset_word_series`] over all `|T|^k` coset tuples in lex order.
pub fn marginality_check(w: &WordExpr, data: &TransversalData, bound: u128) -> Result<Marginality> {
    marginality_check_with(w, data, bound, Execution::default())
}

pub fn marginality_check_with(
    w: &WordExpr,
    data: &TransversalData,
    bound: u128,
    exec: Execution,
) -> Result<Marginality> {
    let n = data.transversal.len();
    let k = w.k();
    let size = (0..k).fold(1u128, |acc, _| acc.saturating_mul(n as u128));
    if size > bound {
        return Err(Error::BoundExceeded { size, bound });
    }
    let tuples: Vec<Vec<usize>> = (0..size as usize)
        .map(|mut idx| {
            let mut t = vec![0; k];
            for slot in t.iter_mut().rev() {
                *slot = idx % n;
                idx /= n;
            }
            t
        })
        .collect();
    let results = par::map_slice(exec, &tuples, |cosets| {
        coset_word_series(w, data, cosets).map(|cws| (cws.target, cws.series.is_constant()))
    });
    let mut entries = Vec::with_capacity(tuples.len());
    for (cosets, res) in tuples.into_iter().zip(results) {
        let (target, constancy) = res?;
        match constancy {
            Constancy::Constant(constant) => entries.push(CosetConstant {
                cosets,
                target,
                constant,
            }),
            Constancy::NotConstant {
                component,
                monomial,
                coefficient,
            } => {
                return Ok(Marginality::NonConstant(NonConstantWitness {
                    cosets,
                    target,
                    component,
                    monomial,
                    coefficient,
                }))
            }
        }
    }
    Ok(Marginality::Constant {
        entries,
        image_bound: size,
    })
}

/// Applies `map` to every coefficient of the law, the conjugation series
/// and the corrections. The coset table is unchanged.
pub fn transport_atlas(data: &TransversalData, map: &CoeffMap) -> Result<TransversalData> {
    let law = data.group.law().transport(map)?;
    let group = StandardGroup::new(law, data.group.level())?;
    let conj = data.conj.iter().map(|c| c.transport(map)).collect::<Result<Vec<_>>>()?;
    let corrections = data
        .corrections
        .iter()
        .map(|(k, a)| Ok((*k, a.transport(map)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    TransversalData::new(group, data.transversal.clone(), conj, corrections, data.split)
}

/// Named C2 extensions of a standard group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuiltinExtension {
    /// `C_s = X`: the direct product.
    C2Trivial,
    /// `C_s = I(X)`, an automorphism for commutative laws.
    C2Inverse,
    /// `C_s = (+-X1, .., +-Xd)`; `true` means negate.
    C2Sign(Vec<bool>),
}

impl FromStr for BuiltinExtension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "c2-trivial" => Ok(BuiltinExtension::C2Trivial),
            "c2-inverse" => Ok(BuiltinExtension::C2Inverse),
            other => {
                if let Some(signs) = other.strip_prefix("c2-sign:") {
                    let v = signs
                        .chars()
                        .map(|c| match c {
                            '+' => Ok(false),
                            '-' => Ok(true),
                            _ => Err(Error::Unknown(format!("bad sign '{c}' in '{other}'"))),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if v.is_empty() {
                        return Err(Error::Unknown(format!("no signs in '{other}'")));
                    }
                    Ok(BuiltinExtension::C2Sign(v))
                } else {
                    Err(Error::Unknown(format!(
                        "unknown extension '{other}' (expected c2-trivial, c2-inverse or c2-sign:+-..)"
                    )))
                }
            }
        }
    }
}

impl fmt::Display for BuiltinExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinExtension::C2Trivial => f.write_str("c2-trivial"),
            BuiltinExtension::C2Inverse => f.write_str("c2-inverse"),
            BuiltinExtension::C2Sign(v) => {
                let s: String = v.iter().map(|&neg| if neg { '-' } else { '+' }).collect();
                write!(f, "c2-sign:{s}")
            }
        }
    }
}

pub fn builtin_extension(ext: &BuiltinExtension, group: StandardGroup) -> Result<TransversalData> {
    let id = group.identity_series();
    let action = match ext {
        BuiltinExtension::C2Trivial => id.clone(),
        BuiltinExtension::C2Inverse => group.law().inverse().clone(),
        BuiltinExtension::C2Sign(signs) => {
            if signs.len() != group.dim() {
                return Err(Error::Shape(format!(
                    "{} signs for a group of dimension {}",
                    signs.len(),
                    group.dim()
                )));
            }
            let comps: Vec<Series> = id
                .components()
                .iter()
                .zip(signs)
                .map(|(x, &neg)| if neg { x.neg() } else { x.clone() })
                .collect();
            SeriesTuple::new(comps)?
        }
    };
    mk_split_extension(group, Transversal::cyclic(2)?, vec![id, action])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::{builtin_fgl, BuiltinLaw};
    use crate::ring::{RingSpec, Specialisation};
    use crate::words::{eval_word, parse_word, word_series};

    const BOUND: u128 = 1 << 24;

    fn group(law: BuiltinLaw, spec: &RingSpec, cut: u32, level: u32) -> StandardGroup {
        StandardGroup::new(builtin_fgl(law, spec, cut).unwrap(), level).unwrap()
    }

    fn ext(name: &str, g: StandardGroup) -> TransversalData {
        builtin_extension(&name.parse().unwrap(), g).unwrap()
    }

    #[test]
    fn builtin_actions() {
        let spec = RingSpec::p_adic(2, 4).unwrap();
        ext("c2-trivial", group(BuiltinLaw::Additive(1), &spec, 4, 1));
        ext("c2-inverse", group(BuiltinLaw::Additive(2), &spec, 4, 1));
        ext("c2-inverse", group(BuiltinLaw::Multiplicative, &spec, 4, 1));
        ext("c2-sign:--+", group(BuiltinLaw::Heisenberg, &spec, 4, 1));
        let h = group(BuiltinLaw::Heisenberg, &spec, 4, 1);
        assert!(matches!(
            builtin_extension(&BuiltinExtension::C2Inverse, h.clone()),
            Err(Error::Transversal(_))
        ));
        assert!(builtin_extension(&"c2-sign:-++".parse().unwrap(), h).is_err());
        let m = group(BuiltinLaw::Multiplicative, &spec, 4, 1);
        assert!(builtin_extension(&"c2-sign:-".parse().unwrap(), m).is_err());
        assert_eq!(
            "c2-sign:+-".parse::<BuiltinExtension>().unwrap().to_string(),
            "c2-sign:+-"
        );
    }

    #[test]
    fn products_and_inverses() {
        let spec = RingSpec::p_adic(3, 4).unwrap();
        let data = ext("c2-inverse", group(BuiltinLaw::Additive(1), &spec, 4, 1));
        let x = data.parse_element("s", &["3"]).unwrap();
        let y = data.parse_element("s", &["6"]).unwrap();
        assert_eq!(data.h_mul(&x, &y), data.parse_element("1", &["3"]).unwrap());
        assert_eq!(data.h_inv(&x), x);
        let one = data.parse_element("1", &["9"]).unwrap();
        assert_eq!(data.h_inv(&one), data.parse_element("1", &["-9"]).unwrap());
        assert_eq!(data.h_mul(&data.identity(), &x), x);

        let direct = ext("c2-trivial", group(BuiltinLaw::Heisenberg, &spec, 4, 1));
        let a = direct.parse_element("s", &["3", "0", "0"]).unwrap();
        let b = direct.parse_element("s", &["0", "3", "0"]).unwrap();
        assert_eq!(
            direct.h_mul(&a, &b),
            direct.parse_element("1", &["3", "3", "9"]).unwrap()
        );
    }

    #[test]
    fn validation_passes_and_catches_corruption() {
        let spec = RingSpec::p_adic(2, 4).unwrap();
        let data = ext("c2-inverse", group(BuiltinLaw::Additive(1), &spec, 4, 1));
        let r = validate_transversal(&data, ValidationMode::Exhaustive { level_m: 3 }, BOUND).unwrap();
        assert!(r.passed());
        assert_eq!(r.elements, 8);
        let s = validate_transversal(&data, ValidationMode::Sampled { samples: 50, seed: 1 }, BOUND).unwrap();
        assert!(s.passed());

        let bad_t = Transversal::new(
            vec!["1".into(), "s".into()],
            vec![vec![0, 1], vec![1, 1]],
            vec![0, 1],
            0,
        )
        .unwrap();
        let bad =
            TransversalData::new(data.group().clone(), bad_t, data.conj().to_vec(), BTreeMap::new(), true).unwrap();
        let r = validate_transversal(&bad, ValidationMode::Exhaustive { level_m: 3 }, BOUND).unwrap();
        assert!(matches!(r.failure, Some(AxiomFailure::Table(_))));
    }

    #[test]
    fn non_automorphism_fails_validation() {
        let spec = RingSpec::p_adic(3, 3).unwrap();
        let g = group(BuiltinLaw::Multiplicative, &spec, 3, 1);
        let neg = SeriesTuple::new(vec![g.identity_series().components()[0].neg()]).unwrap();
        let data = TransversalData::new(
            g.clone(),
            Transversal::cyclic(2).unwrap(),
            vec![g.identity_series(), neg],
            BTreeMap::new(),
            true,
        )
        .unwrap();
        let r = validate_transversal(&data, ValidationMode::Exhaustive { level_m: 3 }, BOUND).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn coset_series_examples() {
        let spec = RingSpec::eq_char(2, 4).unwrap();
        let data = ext("c2-inverse", group(BuiltinLaw::Additive(1), &spec, 4, 1));
        let sq = parse_word("x1^2").unwrap();
        let cws = coset_word_series(&sq, &data, &[1]).unwrap();
        assert_eq!(cws.target, 0);
        assert!(cws.series.series.is_zero());

        let h = ext("c2-sign:--+", group(BuiltinLaw::Heisenberg, &spec, 4, 1));
        let c = parse_word("[x1,x2]").unwrap();
        let plain = word_series(&c, h.group().law()).unwrap();
        assert_eq!(coset_word_series(&c, &h, &[0, 0]).unwrap().series, plain);
    }

    #[test]
    fn coset_series_match_pointwise() {
        let spec = RingSpec::p_adic(3, 4).unwrap();
        let data = ext("c2-sign:--+", group(BuiltinLaw::Heisenberg, &spec, 4, 1));
        let w = parse_word("x1^2 [x2,x1] x2^-1").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for cosets in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let cws = coset_word_series(&w, &data, &cosets).unwrap();
            for _ in 0..5 {
                let args: Vec<HElement> = cosets
                    .iter()
                    .map(|&t| HElement {
                        coset: t,
                        l: data.group().random_element(&mut rng),
                    })
                    .collect();
                let direct = eval_word(&w, &data, &args).unwrap();
                let coords: Vec<Vec<Elem>> = args.iter().map(|a| a.l.coords().to_vec()).collect();
                assert_eq!(direct.coset, cws.target);
                assert_eq!(direct.l.coords(), cws.series.eval(&coords).unwrap().as_slice());
            }
        }
    }

    #[test]
    fn marginality_examples() {
        let f2 = RingSpec::eq_char(2, 4).unwrap();
        let direct = ext("c2-trivial", group(BuiltinLaw::Additive(1), &f2, 4, 1));
        let c = parse_word("[x1,x2]").unwrap();
        let m = marginality_check(&c, &direct, BOUND).unwrap();
        assert!(m.is_trivial(&direct));
        if let Marginality::Constant { entries, image_bound } = &m {
            assert_eq!(entries.len(), 4);
            assert_eq!(*image_bound, 4);
        }

        let sq = parse_word("x1^2").unwrap();
        let inv2 = ext("c2-inverse", group(BuiltinLaw::Additive(1), &f2, 4, 1));
        assert!(marginality_check(&sq, &inv2, BOUND).unwrap().is_trivial(&inv2));

        let z3 = RingSpec::p_adic(3, 4).unwrap();
        let inv3 = ext("c2-inverse", group(BuiltinLaw::Additive(1), &z3, 4, 1));
        match marginality_check(&sq, &inv3, BOUND).unwrap() {
            Marginality::NonConstant(w) => {
                assert_eq!(w.cosets, vec![0]);
                assert_eq!(w.coefficient, Elem::Residue(2));
            }
            other => panic!("{other:?}"),
        }
        assert!(marginality_check(&sq, &inv3, 1).is_err());
    }

    #[test]
    fn transport_examples() {
        let base = RingSpec::p_adic(2, 3).unwrap();
        let nested = RingSpec::nested(base.clone(), 1, 3).unwrap();
        let data = ext("c2-trivial", group(BuiltinLaw::Additive(1), &nested, 4, 1));
        assert_eq!(transport_atlas(&data, &CoeffMap::Identity).unwrap(), data);
        let s = Specialisation::parse(&nested, &["2"]).unwrap();
        let moved = transport_atlas(&data, &CoeffMap::Specialise(s)).unwrap();
        assert_eq!(moved, ext("c2-trivial", group(BuiltinLaw::Additive(1), &base, 4, 1)));
    }

    #[test]
    fn normality_of_l() {
        let spec = RingSpec::p_adic(2, 4).unwrap();
        let data = ext("c2-sign:--+", group(BuiltinLaw::Heisenberg, &spec, 4, 1));
        let q = data.quotient(2, BOUND).unwrap();
        for x in q.elements() {
            for l in q.elements().iter().filter(|e| e.coset == 0) {
                let conj = q.mul(&q.mul(&q.inv(x), l), x);
                assert_eq!(conj.coset, 0);
            }
        }
    }
}
