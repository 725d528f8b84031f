//! Free-group words: parsing, reduction, evaluation in any [`Group`],
//! symbolic word series over a formal group law, and brute-force word
//! images, verbal and marginal subgroups of finite groups.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fgl::FormalGroupLaw;
use crate::group::{FiniteGroup, Group, TableGroup};
use crate::par::{self, Execution};
use crate::series::{Constancy, Series, SeriesTuple};

/// `x_{generator+1}` or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    fn inverted(self) -> Letter {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

/// A freely reduced word in `x1..xk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WordExpr {
    k: usize,
    letters: Vec<Letter>,
}

impl WordExpr {
    pub fn new(k: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("a word needs at least one variable".into()));
        }
        let mut w = WordExpr { k, letters: Vec::new() };
        for l in letters {
            if l.generator >= k {
                return Err(Error::Invalid(format!("x{} exceeds k = {k}", l.generator + 1)));
            }
            w.push(l);
        }
        Ok(w)
    }

    fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverted()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    /// Number of variables (highest generator index mentioned).
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// True when the word reduced to the identity.
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> WordExpr {
        WordExpr {
            k: self.k,
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    pub fn concat(&self, other: &WordExpr) -> WordExpr {
        let mut w = WordExpr {
            k: self.k.max(other.k),
            letters: self.letters.clone(),
        };
        for &l in &other.letters {
            w.push(l);
        }
        w
    }

    /// `u^-1 v^-1 u v`.
    pub fn commutator(u: &WordExpr, v: &WordExpr) -> WordExpr {
        u.inverse().concat(&v.inverse()).concat(u).concat(v)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, n: i64) -> WordExpr {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = WordExpr {
            k: self.k,
            letters: Vec::new(),
        };
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }
}

/// `w^l`, freely reduced.
pub fn word_power(w: &WordExpr, l: u32) -> Result<WordExpr> {
    if l < 1 {
        return Err(Error::Invalid("word power must be at least 1".into()));
    }
    Ok(w.pow(l as i64))
}

impl fmt::Display for WordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            let e = if l.inverse { -(run as i64) } else { run as i64 };
            if e == 1 {
                parts.push(format!("x{}", l.generator + 1));
            } else {
                parts.push(format!("x{}^{}", l.generator + 1, e));
            }
            i += run;
        }
        f.write_str(&parts.join(" "))
    }
}

struct WordParser<'a> {
    src: &'a [u8],
    pos: usize,
    max_gen: usize,
}

impl WordParser<'_> {
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn int(&mut self) -> Result<i64> {
        let mut neg = false;
        if self.peek() == Some(b'-') {
            neg = true;
            self.pos += 1;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        self.peek();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected an integer"));
        }
        let v: i64 = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(start, "integer too large"))?;
        if v > 1_000_000 {
            return Err(Error::parse(start, "exponent too large"));
        }
        Ok(if neg { -v } else { v })
    }

    fn product(&mut self) -> Result<Vec<Letter>> {
        let mut w = WordExpr {
            k: usize::MAX,
            letters: Vec::new(),
        };
        let mut any = false;
        loop {
            match self.peek() {
                Some(b'x') | Some(b'[') | Some(b'(') | Some(b'1') => {
                    let p = self.power()?;
                    for l in p {
                        w.push(l);
                    }
                    any = true;
                }
                Some(b'*') if any => {
                    self.pos += 1;
                }
                _ => break,
            }
        }
        if !any {
            return Err(Error::parse(self.pos, "expected a word"));
        }
        Ok(w.letters)
    }

    fn power(&mut self) -> Result<Vec<Letter>> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.int()?;
            let w = WordExpr {
                k: usize::MAX,
                letters: atom,
            };
            return Ok(w.pow(n).letters);
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Vec<Letter>> {
        let start = self.pos;
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let digits_start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if digits_start == self.pos {
                    return Err(Error::parse(start, "expected a generator index after 'x'"));
                }
                let idx: usize = std::str::from_utf8(&self.src[digits_start..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| Error::parse(start, "generator index too large"))?;
                if idx == 0 || idx > 64 {
                    return Err(Error::parse(start, "generators are x1..x64"));
                }
                self.max_gen = self.max_gen.max(idx);
                Ok(vec![Letter {
                    generator: idx - 1,
                    inverse: false,
                }])
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Vec::new())
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.product()?;
                if self.peek() != Some(b')') {
                    return Err(Error::parse(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut acc = WordExpr {
                    k: usize::MAX,
                    letters: self.product()?,
                };
                let mut parts = 1;
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    let next = WordExpr {
                        k: usize::MAX,
                        letters: self.product()?,
                    };
                    acc = WordExpr::commutator(&acc, &next);
                    parts += 1;
                }
                if parts < 2 {
                    return Err(Error::parse(self.pos, "a commutator needs at least two entries"));
                }
                if self.peek() != Some(b']') {
                    return Err(Error::parse(self.pos, "expected ']'"));
                }
                self.pos += 1;
                Ok(acc.letters)
            }
            Some(c) => Err(Error::parse(self.pos, format!("unexpected '{}'", c as char))),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }
}

/// Parses `x1 x2^-1 [x1,x2]^2 (x1 x2)^3`. Juxtaposition (or `*`) is the
/// product, `[u,v] = u^-1 v^-1 u v` and `[u,v,w] = [[u,v],w]`.
pub fn parse_word(text: &str) -> Result<WordExpr> {
    let mut p = WordParser {
        src: text.as_bytes(),
        pos: 0,
        max_gen: 0,
    };
    let letters = p.product()?;
    if p.peek().is_some() {
        return Err(Error::parse(p.pos, "trailing input"));
    }
    if p.max_gen == 0 {
        return Err(Error::parse(0, "a word must mention at least one generator"));
    }
    Ok(WordExpr { k: p.max_gen, letters })
}

impl FromStr for WordExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_word(s)
    }
}

/// Left-to-right evaluation of `w` at `args`.
pub fn eval_word<G: Group>(w: &WordExpr, group: &G, args: &[G::Element]) -> Result<G::Element> {
    if args.len() < w.k {
        return Err(Error::Shape(format!(
            "word in {} variables evaluated at {} arguments",
            w.k,
            args.len()
        )));
    }
    Ok(eval_unchecked(w, group, args))
}

fn eval_unchecked<G: Group>(w: &WordExpr, group: &G, args: &[G::Element]) -> G::Element {
    let mut acc = group.identity();
    for l in &w.letters {
        let x = &args[l.generator];
        acc = if l.inverse {
            group.mul(&acc, &group.inv(x))
        } else {
            group.mul(&acc, x)
        };
    }
    acc
}

/// Display name of variable `v` when variables come in blocks of `d`:
/// `X1..Xd`, then `Y1..`, `Z1..`, `U`, `V`, `W`, and `X7_1` style beyond.
pub fn block_var_name(d: usize, v: usize) -> String {
    const LETTERS: [char; 6] = ['X', 'Y', 'Z', 'U', 'V', 'W'];
    let (b, j) = (v / d, v % d + 1);
    match LETTERS.get(b) {
        Some(c) => format!("{c}{j}"),
        None => format!("X{}_{j}", b + 1),
    }
}

/// The word map as one series tuple in `d*k` variables: block `i` holds the
/// coordinates of `x_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordSeries {
    pub word: WordExpr,
    pub dim: usize,
    pub series: SeriesTuple,
}

impl WordSeries {
    pub fn is_constant(&self) -> Constancy {
        self.series.is_constant()
    }

    /// Coordinates of the value at the given argument tuples.
    pub fn eval(&self, args: &[Vec<crate::ring::Elem>]) -> Result<Vec<crate::ring::Elem>> {
        let flat: Vec<_> = args.iter().flat_map(|a| a.iter().cloned()).collect();
        self.series.eval(&flat)
    }
}

/// Symbolic word map: fold `V <- F(V, X_i)` or `V <- F(V, I(X_i))`.
pub fn word_series(w: &WordExpr, law: &FormalGroupLaw) -> Result<WordSeries> {
    let d = law.dim();
    let n = d * w.k;
    let spec = law.spec();
    let cut = law.cutoff();
    let vars = SeriesTuple::identity(spec, n, cut);
    let blocks: Vec<SeriesTuple> = (0..w.k)
        .map(|i| SeriesTuple::new(vars.components()[d * i..d * (i + 1)].to_vec()))
        .collect::<Result<_>>()?;
    let inverses: Vec<Option<SeriesTuple>> = (0..w.k)
        .map(|i| {
            if w.letters.iter().any(|l| l.generator == i && l.inverse) {
                law.inverse().embed(n, d * i).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<_>>()?;
    let mut v: Option<SeriesTuple> = None;
    for l in &w.letters {
        let rhs = if l.inverse {
            inverses[l.generator].as_ref().unwrap()
        } else {
            &blocks[l.generator]
        };
        v = Some(match v {
            None => rhs.clone(),
            Some(acc) => law.combine(&acc, rhs)?,
        });
    }
    let series = match v {
        Some(s) => s,
        None => SeriesTuple::new(vec![Series::zero(spec, n, cut); d])?,
    };
    debug_assert!(series.has_zero_constant());
    Ok(WordSeries {
        word: w.clone(),
        dim: d,
        series,
    })
}

fn check_tuple_bound(n: usize, k: usize, bound: u128) -> Result<()> {
    let size = (0..k).fold(1u128, |acc, _| acc.saturating_mul(n as u128));
    if size > bound {
        return Err(Error::BoundExceeded { size, bound });
    }
    Ok(())
}

fn decode(mut idx: usize, n: usize, k: usize, out: &mut [usize]) {
    for slot in out.iter_mut().take(k).rev() {
        *slot = idx % n;
        idx /= n;
    }
}

/// Word values indexed by tuple, computed on the Cayley table.
fn value_table(w: &WordExpr, table: &TableGroup, exec: Execution) -> Vec<usize> {
    let n = table.order();
    let k = w.k;
    let inner: usize = n.pow(k as u32 - 1);
    let chunks = par::map_range(exec, n, |first| {
        let mut args = vec![0usize; k];
        (0..inner)
            .map(|rest| {
                decode(first * inner + rest, n, k, &mut args);
                eval_unchecked(w, table, &args)
            })
            .collect::<Vec<_>>()
    });
    chunks.into_iter().flatten().collect()
}

/// `w{G}` by enumerating all `k`-tuples.
pub fn word_image<G: FiniteGroup>(w: &WordExpr, g: &G, bound: u128) -> Result<BTreeSet<G::Element>> {
    word_image_with(w, g, bound, Execution::default())
}

pub fn word_image_with<G: FiniteGroup>(
    w: &WordExpr,
    g: &G,
    bound: u128,
    exec: Execution,
) -> Result<BTreeSet<G::Element>> {
    check_tuple_bound(g.order(), w.k, bound)?;
    let table = TableGroup::from_finite_with(g, exec);
    let values: HashSet<usize> = value_table(w, &table, exec).into_iter().collect();
    let elems = g.elements();
    Ok(values.into_iter().map(|i| elems[i].clone()).collect())
}

/// Subgroup generated by `gens` (breadth-first closure).
pub fn generated_subgroup<G: Group>(g: &G, gens: &BTreeSet<G::Element>) -> BTreeSet<G::Element> {
    let mut gens_all: Vec<G::Element> = gens.iter().cloned().collect();
    gens_all.extend(gens.iter().map(|x| g.inv(x)));
    let mut seen: HashSet<G::Element> = HashSet::new();
    let id = g.identity();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for s in &gens_all {
            let y = g.mul(&x, s);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// `w(G)`, the subgroup generated by the word values.
pub fn verbal_subgroup<G: FiniteGroup>(w: &WordExpr, g: &G, bound: u128) -> Result<BTreeSet<G::Element>> {
    let image = word_image(w, g, bound)?;
    Ok(generated_subgroup(g, &image))
}

/// `w*(G)`: elements `h` with `w(.., h x_i, ..) = w(.., x_i, ..)` for every
/// position and every tuple.
pub fn marginal_subgroup<G: FiniteGroup>(w: &WordExpr, g: &G, bound: u128) -> Result<BTreeSet<G::Element>> {
    marginal_subgroup_with(w, g, bound, Execution::default())
}

pub fn marginal_subgroup_with<G: FiniteGroup>(
    w: &WordExpr,
    g: &G,
    bound: u128,
    exec: Execution,
) -> Result<BTreeSet<G::Element>> {
    let n = g.order();
    let k = w.k;
    check_tuple_bound(n, k, bound)?;
    let table = TableGroup::from_finite_with(g, exec);
    let values = value_table(w, &table, exec);
    let stride: Vec<usize> = (0..k).map(|i| n.pow((k - 1 - i) as u32)).collect();
    let keep = par::map_range(exec, n, |h| {
        let mut args = vec![0usize; k];
        for (idx, &v) in values.iter().enumerate() {
            decode(idx, n, k, &mut args);
            for i in 0..k {
                let moved = table.mul(&h, &args[i]);
                let j = idx - args[i] * stride[i] + moved * stride[i];
                if values[j] != v {
                    return false;
                }
            }
        }
        true
    });
    let elems = g.elements();
    Ok(keep
        .into_iter()
        .enumerate()
        .filter(|(_, k)| *k)
        .map(|(i, _)| elems[i].clone())
        .collect())
}

/// Exponent of a finite set of commuting or non-commuting elements: the
/// least `e >= 1` with `x^e = 1` for all of them.
pub fn exponent<G: Group>(g: &G, elems: &BTreeSet<G::Element>) -> u64 {
    let id = g.identity();
    let mut orders: HashMap<G::Element, u64> = HashMap::new();
    for x in elems {
        let mut y = x.clone();
        let mut o = 1u64;
        while y != id {
            y = g.mul(&y, x);
            o += 1;
        }
        orders.insert(x.clone(), o);
    }
    orders.values().fold(1u64, |acc, &o| lcm(acc, o))
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}
