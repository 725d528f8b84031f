//! Truncated multivariate power series `R[[X1..Xn]] / (total degree >= D)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::mono::Monomial;
use crate::par::{self, Execution};
use crate::ring::{sum_into, CoeffMap, Elem, RingSpec};

/// A power series with every stored coefficient nonzero and every exponent
/// vector of total degree below the cutoff.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series {
    spec: RingSpec,
    nvars: usize,
    cutoff: u32,
    terms: BTreeMap<Monomial, Elem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

impl Series {
    pub fn zero(spec: &RingSpec, nvars: usize, cutoff: u32) -> Self {
        Series {
            spec: spec.clone(),
            nvars,
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(spec: &RingSpec, nvars: usize, cutoff: u32, c: Elem) -> Self {
        Self::from_terms(spec, nvars, cutoff, [(Monomial::one(nvars), c)])
            .expect("constant monomial has the right shape")
    }

    /// The variable `X_{i+1}`.
    pub fn var(spec: &RingSpec, nvars: usize, cutoff: u32, i: usize) -> Self {
        Self::from_terms(spec, nvars, cutoff, [(Monomial::var(nvars, i), spec.one())]).expect("variable index in range")
    }

    /// Builds a series from arbitrary terms: repeated monomials are summed,
    /// zeros and terms of degree `>= cutoff` dropped.
    pub fn from_terms(
        spec: &RingSpec,
        nvars: usize,
        cutoff: u32,
        terms: impl IntoIterator<Item = (Monomial, Elem)>,
    ) -> Result<Self> {
        let mut acc = HashMap::new();
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::Shape(format!(
                    "monomial {m} has {} variables, series has {nvars}",
                    m.nvars()
                )));
            }
            if !spec.contains(&c) {
                return Err(Error::Invalid(format!("coefficient {c:?} is not canonical in {spec}")));
            }
            if m.degree() < cutoff {
                sum_into(spec, &mut acc, m, c);
            }
        }
        Ok(Self::from_acc(spec, nvars, cutoff, acc))
    }

    fn from_acc(spec: &RingSpec, nvars: usize, cutoff: u32, acc: HashMap<Monomial, Elem>) -> Self {
        Series {
            spec: spec.clone(),
            nvars,
            cutoff,
            terms: acc.into_iter().filter(|(_, c)| !spec.is_zero(c)).collect(),
        }
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Total-degree cutoff `D`.
    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> &BTreeMap<Monomial, Elem> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.spec.zero())
    }

    pub fn constant_term(&self) -> Elem {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Lowest total degree with a nonzero term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    fn check_same_shape(&self, other: &Series) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch {
                left: self.spec.to_string(),
                right: other.spec.to_string(),
            });
        }
        if self.nvars != other.nvars || self.cutoff != other.cutoff {
            return Err(Error::Shape(format!(
                "series in {} vars (D={}) vs {} vars (D={})",
                self.nvars, self.cutoff, other.nvars, other.cutoff
            )));
        }
        Ok(())
    }

    pub fn arith(&self, other: &Series, op: SeriesOp) -> Result<Series> {
        self.check_same_shape(other)?;
        Ok(match op {
            SeriesOp::Add => self.add_unchecked(other),
            SeriesOp::Sub => self.add_unchecked(&other.neg()),
            SeriesOp::Mul => self.mul_unchecked(other),
        })
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.arith(other, SeriesOp::Add)
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.arith(other, SeriesOp::Sub)
    }

    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.arith(other, SeriesOp::Mul)
    }

    pub fn neg(&self) -> Series {
        Series {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), self.spec.neg(c))).collect(),
            ..self.clone_shape()
        }
    }

    pub fn scale(&self, c: &Elem) -> Series {
        let spec = &self.spec;
        Series {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), spec.mul(a, c)))
                .filter(|(_, a)| !spec.is_zero(a))
                .collect(),
            ..self.clone_shape()
        }
    }

    fn clone_shape(&self) -> Series {
        Series::zero(&self.spec, self.nvars, self.cutoff)
    }

    pub(crate) fn add_unchecked(&self, other: &Series) -> Series {
        let spec = &self.spec;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(slot) => {
                    let s = spec.add(slot, c);
                    if spec.is_zero(&s) {
                        terms.remove(m);
                    } else {
                        *slot = s;
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Series {
            terms,
            ..self.clone_shape()
        }
    }

    pub(crate) fn mul_unchecked(&self, other: &Series) -> Series {
        let spec = &self.spec;
        let mut acc: HashMap<Monomial, Elem> = HashMap::new();
        for (ma, ca) in &self.terms {
            if ma.degree() >= self.cutoff {
                break;
            }
            for (mb, cb) in &other.terms {
                // terms are sorted by degree
                if ma.degree() + mb.degree() >= self.cutoff {
                    break;
                }
                sum_into(spec, &mut acc, ma.mul(mb), spec.mul(ca, cb));
            }
        }
        Series::from_acc(spec, self.nvars, self.cutoff, acc)
    }

    pub fn pow(&self, n: u32) -> Series {
        let mut acc = Series::constant(&self.spec, self.nvars, self.cutoff, self.spec.one());
        for _ in 0..n {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Rewrites the series into `nvars` variables, mapping variable `i` to
    /// variable `offset + i`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Result<Series> {
        if offset + self.nvars > nvars {
            return Err(Error::Shape(format!(
                "cannot embed {} variables at offset {offset} into {nvars}",
                self.nvars
            )));
        }
        Ok(Series {
            spec: self.spec.clone(),
            nvars,
            cutoff: self.cutoff,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.embed(nvars, offset), c.clone()))
                .collect(),
        })
    }

    /// Homogeneous part of total degree `d`.
    pub fn homogeneous(&self, d: u32) -> Series {
        Series {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            ..self.clone_shape()
        }
    }

    /// Drops every term of total degree `>= cutoff`.
    pub fn truncate(&self, cutoff: u32) -> Series {
        let cutoff = cutoff.min(self.cutoff);
        Series {
            spec: self.spec.clone(),
            nvars: self.nvars,
            cutoff,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < cutoff)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `self(args[0], .., args[n-1])`. Every argument must have zero
    /// constant term; the arguments share spec, variable count and cutoff.
    pub fn compose(&self, args: &[Series]) -> Result<Series> {
        check_args(self, args)?;
        Ok(compose_checked(self, args, &mut PowerCache::new(args)))
    }

    /// Applies a coefficient map to every coefficient (`F_phi`).
    pub fn transport(&self, map: &CoeffMap) -> Result<Series> {
        let target = map.target(&self.spec)?;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), map.apply(&self.spec, c)))
            .filter(|(_, c)| !target.is_zero(c))
            .collect();
        Ok(Series {
            spec: target,
            nvars: self.nvars,
            cutoff: self.cutoff,
            terms,
        })
    }

    /// Evaluates at a point of the maximal ideal. Terms of degree `>= D` are
    /// treated as zero, which is exact when `D` is at least the ring's
    /// nilpotency index.
    pub fn eval(&self, x: &[Elem]) -> Result<Elem> {
        let powers = eval_powers(&self.spec, self.nvars, self.cutoff, x)?;
        Ok(eval_with(&self.spec, &self.terms, &powers))
    }

    /// Substitutes the values given as `Some` (each in the maximal ideal) and
    /// keeps the remaining variables, renumbered in order.
    pub fn partial_eval(&self, values: &[Option<Elem>]) -> Result<Series> {
        if values.len() != self.nvars {
            return Err(Error::Shape(format!(
                "{} values for a series in {} variables",
                values.len(),
                self.nvars
            )));
        }
        let spec = &self.spec;
        let kept: Vec<usize> = (0..self.nvars).filter(|&i| values[i].is_none()).collect();
        let mut powers: Vec<Vec<Elem>> = Vec::with_capacity(self.nvars);
        for (i, v) in values.iter().enumerate() {
            match v {
                Some(a) => {
                    check_in_ideal(spec, a, i)?;
                    powers.push(power_table(spec, a, self.cutoff));
                }
                None => powers.push(Vec::new()),
            }
        }
        let mut acc = HashMap::new();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = Vec::with_capacity(kept.len());
            for (i, &e) in m.exps().iter().enumerate() {
                if values[i].is_some() {
                    if e > 0 {
                        coeff = spec.mul(&coeff, &powers[i][e as usize]);
                    }
                } else {
                    exps.push(e);
                }
            }
            sum_into(spec, &mut acc, Monomial::new(exps), coeff);
        }
        Ok(Series::from_acc(spec, kept.len(), self.cutoff, acc))
    }

    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let cs = self.spec.format_elem(c);
                if m.is_one() {
                    return cs;
                }
                let ms = m.render(names);
                if cs == "1" {
                    ms
                } else if cs.contains('+') {
                    format!("({cs})*{ms}")
                } else {
                    format!("{cs}*{ms}")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|i| format!("X{}", i + 1)))
    }
}

fn check_in_ideal(spec: &RingSpec, a: &Elem, i: usize) -> Result<()> {
    if !spec.contains(a) {
        return Err(Error::Invalid(format!(
            "argument {} is not an element of {spec}",
            i + 1
        )));
    }
    if !spec.valuation(a).at_least(1) {
        return Err(Error::OutsideMaximalIdeal(format!(
            "argument {} = {} has valuation 0",
            i + 1,
            spec.format_elem(a)
        )));
    }
    Ok(())
}

fn power_table(spec: &RingSpec, a: &Elem, cutoff: u32) -> Vec<Elem> {
    let mut v = vec![spec.one()];
    for j in 1..cutoff.max(1) as usize {
        let next = spec.mul(&v[j - 1], a);
        v.push(next);
    }
    v
}

pub(crate) fn eval_powers(spec: &RingSpec, nvars: usize, cutoff: u32, x: &[Elem]) -> Result<Vec<Vec<Elem>>> {
    if x.len() != nvars {
        return Err(Error::Shape(format!("{} arguments for {nvars} variables", x.len())));
    }
    x.iter()
        .enumerate()
        .map(|(i, a)| {
            check_in_ideal(spec, a, i)?;
            Ok(power_table(spec, a, cutoff))
        })
        .collect()
}

pub(crate) fn eval_with(spec: &RingSpec, terms: &BTreeMap<Monomial, Elem>, powers: &[Vec<Elem>]) -> Elem {
    let mut acc = spec.zero();
    for (m, c) in terms {
        let mut t = c.clone();
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                t = spec.mul(&t, &powers[i][e as usize]);
                if spec.is_zero(&t) {
                    break;
                }
            }
        }
        acc = spec.add(&acc, &t);
    }
    acc
}

fn check_args(outer: &Series, args: &[Series]) -> Result<()> {
    if args.len() != outer.nvars {
        return Err(Error::Shape(format!(
            "series in {} variables composed with {} arguments",
            outer.nvars,
            args.len()
        )));
    }
    let Some(first) = args.first() else {
        return Ok(());
    };
    for (i, a) in args.iter().enumerate() {
        a.check_same_shape(first)?;
        if a.spec != outer.spec {
            return Err(Error::SpecMismatch {
                left: outer.spec.to_string(),
                right: a.spec.to_string(),
            });
        }
        if a.cutoff != outer.cutoff {
            return Err(Error::Shape(format!(
                "outer cutoff {} differs from argument cutoff {}",
                outer.cutoff, a.cutoff
            )));
        }
        if !outer.spec.is_zero(&a.constant_term()) {
            return Err(Error::NonZeroConstant(format!("#{}", i + 1)));
        }
    }
    Ok(())
}

/// Lazily computed powers `args[i]^e`.
struct PowerCache<'a> {
    args: &'a [Series],
    powers: Vec<Vec<Series>>,
}

impl<'a> PowerCache<'a> {
    fn new(args: &'a [Series]) -> Self {
        PowerCache {
            args,
            powers: args
                .iter()
                .map(|a| vec![Series::constant(&a.spec, a.nvars, a.cutoff, a.spec.one()), a.clone()])
                .collect(),
        }
    }

    fn get(&mut self, i: usize, e: usize) -> &Series {
        while self.powers[i].len() <= e {
            let next = self.powers[i].last().unwrap().mul_unchecked(&self.args[i]);
            self.powers[i].push(next);
        }
        &self.powers[i][e]
    }
}

fn compose_checked(outer: &Series, args: &[Series], cache: &mut PowerCache<'_>) -> Series {
    let spec = &outer.spec;
    let (nvars, cutoff) = match args.first() {
        Some(a) => (a.nvars, a.cutoff),
        None => (0, outer.cutoff),
    };
    let orders: Vec<u32> = args.iter().map(|a| a.order().unwrap_or(u32::MAX)).collect();
    let mut result = Series::zero(spec, nvars, cutoff);
    // Group terms by their exponent on all but the last variable so the
    // shared prefix product is computed once.
    let mut prefix_cache: HashMap<Vec<u16>, Series> = HashMap::new();
    for (m, c) in &outer.terms {
        let min_deg: u64 = m.exps().iter().zip(&orders).map(|(&e, &o)| e as u64 * o as u64).sum();
        if min_deg >= cutoff as u64 {
            continue;
        }
        let exps = m.exps();
        let n = exps.len();
        let term = if n == 0 {
            Series::constant(spec, nvars, cutoff, c.clone())
        } else {
            let prefix = exps[..n - 1].to_vec();
            let base = match prefix_cache.get(&prefix) {
                Some(s) => s.clone(),
                None => {
                    let mut s = Series::constant(spec, nvars, cutoff, spec.one());
                    for (i, &e) in prefix.iter().enumerate() {
                        if e > 0 {
                            s = s.mul_unchecked(cache.get(i, e as usize));
                        }
                    }
                    prefix_cache.insert(prefix, s.clone());
                    s
                }
            };
            let last = exps[n - 1] as usize;
            let s = if last > 0 {
                base.mul_unchecked(cache.get(n - 1, last))
            } else {
                base
            };
            s.scale(c)
        };
        result = result.add_unchecked(&term);
    }
    result
}

/// A nonempty tuple of series sharing spec, variable count and cutoff.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesTuple {
    components: Vec<Series>,
}

/// Outcome of a constancy test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constancy {
    Constant(Vec<Elem>),
    NotConstant {
        component: usize,
        monomial: Monomial,
        coefficient: Elem,
    },
}

impl Constancy {
    pub fn is_constant(&self) -> bool {
        matches!(self, Constancy::Constant(_))
    }
}

impl SeriesTuple {
    pub fn new(components: Vec<Series>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::Shape("series tuple must be nonempty".into()))?;
        for c in &components[1..] {
            c.check_same_shape(first)?;
        }
        Ok(SeriesTuple { components })
    }

    /// `(X1, .., Xn)`.
    pub fn identity(spec: &RingSpec, nvars: usize, cutoff: u32) -> Self {
        SeriesTuple {
            components: (0..nvars).map(|i| Series::var(spec, nvars, cutoff, i)).collect(),
        }
    }

    pub fn zero(spec: &RingSpec, len: usize, nvars: usize, cutoff: u32) -> Self {
        SeriesTuple {
            components: vec![Series::zero(spec, nvars, cutoff); len],
        }
    }

    pub fn components(&self) -> &[Series] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Series> {
        self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn spec(&self) -> &RingSpec {
        &self.components[0].spec
    }

    pub fn nvars(&self) -> usize {
        self.components[0].nvars
    }

    pub fn cutoff(&self) -> u32 {
        self.components[0].cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Series::is_zero)
    }

    pub fn has_zero_constant(&self) -> bool {
        let spec = self.spec();
        self.components.iter().all(|c| spec.is_zero(&c.constant_term()))
    }

    /// `self(inner)`: `self` has `inner.len()` variables.
    pub fn compose(&self, inner: &SeriesTuple) -> Result<SeriesTuple> {
        self.compose_with(inner, Execution::default())
    }

    pub fn compose_with(&self, inner: &SeriesTuple, exec: Execution) -> Result<SeriesTuple> {
        check_args(&self.components[0], &inner.components)?;
        let out = par::map_slice(exec, &self.components, |g| {
            compose_checked(g, &inner.components, &mut PowerCache::new(&inner.components))
        });
        Ok(SeriesTuple { components: out })
    }

    /// Composition with an argument list given as plain series.
    pub fn compose_series(&self, args: &[Series]) -> Result<SeriesTuple> {
        check_args(&self.components[0], args)?;
        let mut cache = PowerCache::new(args);
        Ok(SeriesTuple {
            components: self
                .components
                .iter()
                .map(|g| compose_checked(g, args, &mut cache))
                .collect(),
        })
    }

    pub fn transport(&self, map: &CoeffMap) -> Result<SeriesTuple> {
        Ok(SeriesTuple {
            components: self
                .components
                .iter()
                .map(|c| c.transport(map))
                .collect::<Result<_>>()?,
        })
    }

    pub fn eval(&self, x: &[Elem]) -> Result<Vec<Elem>> {
        let spec = self.spec();
        let powers = eval_powers(spec, self.nvars(), self.cutoff(), x)?;
        Ok(self
            .components
            .iter()
            .map(|c| eval_with(spec, &c.terms, &powers))
            .collect())
    }

    pub fn partial_eval(&self, values: &[Option<Elem>]) -> Result<SeriesTuple> {
        Ok(SeriesTuple {
            components: self
                .components
                .iter()
                .map(|c| c.partial_eval(values))
                .collect::<Result<_>>()?,
        })
    }

    pub fn embed(&self, nvars: usize, offset: usize) -> Result<SeriesTuple> {
        Ok(SeriesTuple {
            components: self
                .components
                .iter()
                .map(|c| c.embed(nvars, offset))
                .collect::<Result<_>>()?,
        })
    }

    pub fn sub(&self, other: &SeriesTuple) -> Result<SeriesTuple> {
        if self.len() != other.len() {
            return Err(Error::Shape(format!("{} vs {} components", self.len(), other.len())));
        }
        Ok(SeriesTuple {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub(b))
                .collect::<Result<_>>()?,
        })
    }

    /// Constant tuple iff every term of positive degree vanishes; otherwise
    /// the smallest graded-lex nonconstant monomial (lowest component first
    /// on ties).
    pub fn is_constant(&self) -> Constancy {
        let mut best: Option<(usize, &Monomial, &Elem)> = None;
        for (j, c) in self.components.iter().enumerate() {
            if let Some((m, e)) = c.terms.iter().find(|(m, _)| !m.is_one()) {
                if best.is_none_or(|(_, bm, _)| m < bm) {
                    best = Some((j, m, e));
                }
            }
        }
        match best {
            None => Constancy::Constant(self.components.iter().map(Series::constant_term).collect()),
            Some((component, m, e)) => Constancy::NotConstant {
                component,
                monomial: m.clone(),
                coefficient: e.clone(),
            },
        }
    }

    /// Smallest graded-lex monomial where the two tuples differ.
    pub fn first_difference(&self, other: &SeriesTuple) -> Result<Option<(usize, Monomial)>> {
        let diff = self.sub(other)?;
        let mut best: Option<(usize, Monomial)> = None;
        for (j, c) in diff.components.iter().enumerate() {
            if let Some(m) = c.terms.keys().next() {
                if best.as_ref().is_none_or(|(_, bm)| m < bm) {
                    best = Some((j, m.clone()));
                }
            }
        }
        Ok(best)
    }

    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        let parts: Vec<String> = self.components.iter().map(|c| c.render(names)).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for SeriesTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|i| format!("X{}", i + 1)))
    }
}

/// Parses a polynomial written in variables `X1..Xn`, e.g. `X1 + 2*X1*X2^2`,
/// with coefficients in the coefficient-string grammar of `spec`.
pub fn parse_series(spec: &RingSpec, nvars: usize, cutoff: u32, text: &str) -> Result<Series> {
    let mut terms = Vec::new();
    for (pos, raw) in split_top_level(text) {
        let (neg, body) = raw;
        let mut exps = vec![0u16; nvars];
        let mut coeff = spec.one();
        for factor in split_factors(&body) {
            let f = factor.trim();
            if let Some(rest) = f.strip_prefix('X') {
                let (idx, pow) = match rest.split_once('^') {
                    Some((a, b)) => (a, b),
                    None => (rest, "1"),
                };
                let idx: usize = idx
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(pos, format!("bad variable '{f}'")))?;
                let pow: u16 = pow
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(pos, format!("bad exponent in '{f}'")))?;
                if idx == 0 || idx > nvars {
                    return Err(Error::parse(pos, format!("variable X{idx} out of range")));
                }
                exps[idx - 1] += pow;
            } else {
                let c = spec
                    .parse_elem(f)
                    .map_err(|e| Error::parse(pos, format!("coefficient '{f}': {e}")))?;
                coeff = spec.mul(&coeff, &c);
            }
        }
        if neg {
            coeff = spec.neg(&coeff);
        }
        terms.push((Monomial::new(exps), coeff));
    }
    Series::from_terms(spec, nvars, cutoff, terms)
}

fn split_top_level(text: &str) -> Vec<(usize, (bool, String))> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let after_caret = cur.trim_end().ends_with('^');
        if depth == 0 && (ch == '+' || ch == '-') && !after_caret {
            if !cur.trim().is_empty() {
                out.push((start, (neg, std::mem::take(&mut cur))));
            } else {
                cur.clear();
            }
            neg = ch == '-';
            start = i + 1;
            continue;
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push((start, (neg, cur)));
    }
    out
}

fn split_factors(term: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in term.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if ch == '*' && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    out.push(cur);
    out
}
