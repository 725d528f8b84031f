//! Canonical JSON for rings, series, laws, groups, extensions and reports.
//!
//! Objects are `serde_json::Value`s whose maps keep keys sorted, series terms
//! are listed in graded-lex order and coefficients use the canonical string
//! form, so equal inputs serialise to identical bytes.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::atlas::{
    AxiomFailure, CorrectionKey, CosetConstant, Marginality, NonConstantWitness, Transversal, TransversalData,
    ValidationMode, ValidationReport,
};
use crate::error::{Error, Result};
use crate::fgl::{builtin_fgl, BuiltinLaw, FglReport, FormalGroupLaw};
use crate::group::TableDefect;
use crate::mono::Monomial;
use crate::ring::{Elem, RingKind, RingSpec};
use crate::series::{parse_series, Series, SeriesTuple};
use crate::specialise::{LevelStatus, ProbeReport};
use crate::stdgrp::{GroupElement, StandardGroup};

/// Pretty-printed canonical form with a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialise");
    s.push('\n');
    s
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| invalid(format!("missing field '{key}'")))
}

fn uint(v: &Value, key: &str) -> Result<u64> {
    field(v, key)?
        .as_u64()
        .ok_or_else(|| invalid(format!("field '{key}' must be a non-negative integer")))
}

fn small(v: &Value, key: &str) -> Result<u32> {
    u32::try_from(uint(v, key)?).map_err(|_| invalid(format!("field '{key}' is too large")))
}

fn string<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    field(v, key)?
        .as_str()
        .ok_or_else(|| invalid(format!("field '{key}' must be a string")))
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    field(v, key)?
        .as_array()
        .ok_or_else(|| invalid(format!("field '{key}' must be an array")))
}

pub fn ring_to_json(spec: &RingSpec) -> Value {
    match spec.kind() {
        RingKind::PAdic | RingKind::EqChar => json!({
            "kind": spec.kind().as_str(),
            "p": spec.p(),
            "K": spec.precision(),
        }),
        RingKind::Nested => json!({
            "kind": "nested",
            "base": ring_to_json(spec.base().expect("nested ring has a base")),
            "m": spec.t_vars(),
            "Dt": spec.t_cutoff().expect("nested ring has a cutoff"),
        }),
    }
}

/// Accepts the object form or a shorthand string; see [`parse_ring_shorthand`].
pub fn ring_from_json(v: &Value) -> Result<RingSpec> {
    if let Some(s) = v.as_str() {
        return parse_ring_shorthand(s);
    }
    match string(v, "kind")? {
        "p-adic" => RingSpec::p_adic(uint(v, "p")?, small(v, "K")?),
        "eq-char" => RingSpec::eq_char(uint(v, "p")?, small(v, "K")?),
        "nested" => RingSpec::nested(
            ring_from_json(field(v, "base")?)?,
            uint(v, "m")? as usize,
            small(v, "Dt")?,
        ),
        other => Err(Error::InvalidSpec(format!("unknown ring kind '{other}'"))),
    }
}

/// `padic:p:K`, `eqchar:p:K`, or `nested:m:Dt:<base>`.
pub fn parse_ring_shorthand(s: &str) -> Result<RingSpec> {
    let parts: Vec<&str> = s.trim().split(':').collect();
    let num = |x: &str| -> Result<u64> {
        x.parse()
            .map_err(|_| Error::InvalidSpec(format!("'{x}' is not a number in ring '{s}'")))
    };
    match parts.as_slice() {
        ["padic", p, k] => RingSpec::p_adic(num(p)?, num(k)? as u32),
        ["eqchar", p, k] => RingSpec::eq_char(num(p)?, num(k)? as u32),
        ["nested", m, dt, rest @ ..] if !rest.is_empty() => RingSpec::nested(
            parse_ring_shorthand(&rest.join(":"))?,
            num(m)? as usize,
            num(dt)? as u32,
        ),
        _ => Err(Error::InvalidSpec(format!(
            "ring '{s}' (expected padic:p:K, eqchar:p:K or nested:m:Dt:<base>)"
        ))),
    }
}

pub fn ring_shorthand(spec: &RingSpec) -> String {
    match spec.kind() {
        RingKind::PAdic => format!("padic:{}:{}", spec.p(), spec.precision()),
        RingKind::EqChar => format!("eqchar:{}:{}", spec.p(), spec.precision()),
        RingKind::Nested => format!(
            "nested:{}:{}:{}",
            spec.t_vars(),
            spec.t_cutoff().unwrap(),
            ring_shorthand(spec.base().unwrap())
        ),
    }
}

pub fn elem_to_json(spec: &RingSpec, e: &Elem) -> Value {
    Value::String(spec.format_elem(e))
}

pub fn elems_to_json(spec: &RingSpec, es: &[Elem]) -> Value {
    Value::Array(es.iter().map(|e| elem_to_json(spec, e)).collect())
}

pub fn elem_from_json(spec: &RingSpec, v: &Value) -> Result<Elem> {
    match v {
        Value::String(s) => spec.parse_elem(s),
        Value::Number(n) => spec.parse_elem(&n.to_string().replace('-', "0-")),
        _ => Err(invalid("coefficients are strings or integers")),
    }
}

pub fn series_to_json(s: &Series) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .iter()
        .map(|(m, c)| json!([m.exps(), s.spec().format_elem(c)]))
        .collect();
    json!({ "nvars": s.nvars(), "D": s.cutoff(), "terms": terms })
}

/// Accepts the object form or a polynomial string in `X1..Xn`.
pub fn series_from_json(spec: &RingSpec, nvars: usize, cutoff: u32, v: &Value) -> Result<Series> {
    if let Some(text) = v.as_str() {
        return parse_series(spec, nvars, cutoff, text);
    }
    if uint(v, "nvars")? as usize != nvars || small(v, "D")? != cutoff {
        return Err(Error::Shape(format!(
            "series must have nvars = {nvars} and D = {cutoff}"
        )));
    }
    let mut terms = Vec::new();
    for t in array(v, "terms")? {
        let pair = t
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| invalid("a term is [exponents, coefficient]"))?;
        let exps = pair[0]
            .as_array()
            .ok_or_else(|| invalid("exponents must be an array"))?
            .iter()
            .map(|x| x.as_u64().and_then(|x| u16::try_from(x).ok()))
            .collect::<Option<Vec<u16>>>()
            .ok_or_else(|| invalid("exponents must be small non-negative integers"))?;
        if exps.len() != nvars {
            return Err(Error::Shape(format!(
                "exponent vector of length {} in {nvars} variables",
                exps.len()
            )));
        }
        terms.push((Monomial::new(exps), elem_from_json(spec, &pair[1])?));
    }
    Series::from_terms(spec, nvars, cutoff, terms)
}

pub fn tuple_to_json(t: &SeriesTuple) -> Value {
    Value::Array(t.components().iter().map(series_to_json).collect())
}

pub fn tuple_from_json(spec: &RingSpec, nvars: usize, cutoff: u32, len: usize, v: &Value) -> Result<SeriesTuple> {
    let items = v.as_array().ok_or_else(|| invalid("a series tuple is an array"))?;
    if items.len() != len {
        return Err(Error::Shape(format!("expected {len} series, got {}", items.len())));
    }
    let comps = items
        .iter()
        .map(|s| series_from_json(spec, nvars, cutoff, s))
        .collect::<Result<Vec<_>>>()?;
    SeriesTuple::new(comps)
}

/// Law series as read from a file, before any axiom check.
#[derive(Clone, Debug)]
pub struct RawLaw {
    pub law: SeriesTuple,
    pub inverse: Option<SeriesTuple>,
}

impl RawLaw {
    pub fn into_law(self) -> Result<FormalGroupLaw> {
        match self.inverse {
            Some(i) => FormalGroupLaw::with_inverse(self.law, i),
            None => FormalGroupLaw::new(self.law),
        }
    }
}

pub fn fgl_to_json(law: &FormalGroupLaw, with_inverse: bool) -> Value {
    let mut v = json!({
        "d": law.dim(),
        "D": law.cutoff(),
        "spec": ring_to_json(law.spec()),
        "F": tuple_to_json(law.law()),
    });
    if with_inverse {
        v["I"] = tuple_to_json(law.inverse());
    }
    v
}

/// `{"d", "D", "spec", "F", "I"?}` or `{"builtin", "spec", "D"}`.
pub fn raw_law_from_json(v: &Value) -> Result<RawLaw> {
    let spec = ring_from_json(field(v, "spec")?)?;
    let cutoff = small(v, "D")?;
    if let Some(name) = v.get("builtin") {
        let name: BuiltinLaw = name
            .as_str()
            .ok_or_else(|| invalid("'builtin' must be a string"))?
            .parse()?;
        return Ok(RawLaw {
            law: name.series(&spec, cutoff),
            inverse: None,
        });
    }
    let d = uint(v, "d")? as usize;
    if d == 0 {
        return Err(Error::Shape("a law needs d >= 1".into()));
    }
    let law = tuple_from_json(&spec, 2 * d, cutoff, d, field(v, "F")?)?;
    let inverse = match v.get("I") {
        Some(i) => Some(tuple_from_json(&spec, d, cutoff, d, i)?),
        None => None,
    };
    Ok(RawLaw { law, inverse })
}

pub fn fgl_from_json(v: &Value) -> Result<FormalGroupLaw> {
    raw_law_from_json(v)?.into_law()
}

pub fn group_to_json(g: &StandardGroup) -> Value {
    json!({ "law": fgl_to_json(g.law(), false), "N": g.level() })
}

/// `{"law": <law object or path>, "N": n}`; paths are relative to `dir`.
pub fn group_from_json(v: &Value, dir: &Path) -> Result<StandardGroup> {
    let law = match field(v, "law")? {
        Value::String(path) => load_fgl(&dir.join(path))?,
        other => fgl_from_json(other)?,
    };
    StandardGroup::new(law, small(v, "N")?)
}

pub fn element_to_json(g: &StandardGroup, x: &GroupElement) -> Value {
    elems_to_json(g.spec(), x.coords())
}

fn correction_name(t: &Transversal, key: CorrectionKey) -> String {
    match key {
        CorrectionKey::Mul(a, b) => format!("mul:{},{}", t.name(a), t.name(b)),
        CorrectionKey::Inv(a) => format!("inv:{}", t.name(a)),
    }
}

fn correction_key(t: &Transversal, name: &str) -> Result<CorrectionKey> {
    if let Some(rest) = name.strip_prefix("mul:") {
        let (a, b) = rest
            .split_once(',')
            .ok_or_else(|| invalid(format!("correction key '{name}' needs two cosets")))?;
        Ok(CorrectionKey::Mul(t.index_of(a)?, t.index_of(b)?))
    } else if let Some(rest) = name.strip_prefix("inv:") {
        Ok(CorrectionKey::Inv(t.index_of(rest)?))
    } else {
        Err(invalid(format!("correction key '{name}' (expected mul:t,r or inv:t)")))
    }
}

pub fn transversal_to_json(t: &Transversal) -> Value {
    let names = t.names();
    let table: Vec<Vec<&str>> = (0..t.len())
        .map(|a| (0..t.len()).map(|b| t.name(t.mul(a, b))).collect())
        .collect();
    let inv: Vec<&str> = (0..t.len()).map(|a| t.name(t.inv(a))).collect();
    json!({
        "elements": names,
        "mul_table": table,
        "inv": inv,
        "identity": t.name(t.identity()),
    })
}

pub fn transversal_from_json(v: &Value) -> Result<Transversal> {
    let names: Vec<String> = array(v, "elements")?
        .iter()
        .map(|x| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| invalid("element names are strings"))
        })
        .collect::<Result<_>>()?;
    let index = |x: &Value| -> Result<usize> {
        let s = x.as_str().ok_or_else(|| invalid("table entries are element names"))?;
        names
            .iter()
            .position(|n| n == s)
            .ok_or_else(|| Error::Unknown(format!("no transversal element named '{s}'")))
    };
    let mul = array(v, "mul_table")?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| invalid("mul_table rows are arrays"))?
                .iter()
                .map(index)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let inv = array(v, "inv")?.iter().map(index).collect::<Result<Vec<_>>>()?;
    let identity = index(field(v, "identity")?)?;
    Transversal::new(names, mul, inv, identity)
}

pub fn extension_to_json(data: &TransversalData) -> Value {
    let t = data.transversal();
    let conj: Map<String, Value> = (0..t.len())
        .map(|i| (t.name(i).to_string(), tuple_to_json(&data.conj()[i])))
        .collect();
    let mut v = json!({
        "L": group_to_json(data.group()),
        "T": transversal_to_json(t),
        "C": conj,
        "split": data.is_split(),
    });
    if !data.corrections().is_empty() {
        let a: Map<String, Value> = data
            .corrections()
            .iter()
            .map(|(k, s)| (correction_name(t, *k), tuple_to_json(s)))
            .collect();
        v["A"] = Value::Object(a);
    }
    v
}

/// `{"L", "T", "C", "A"?, "split"?}`. Missing `C` entries are the identity;
/// `split` defaults to the absence of `A`. Only shapes are checked here.
pub fn extension_from_json(v: &Value, dir: &Path) -> Result<TransversalData> {
    let group = match field(v, "L")? {
        Value::String(path) => load_group(&dir.join(path))?,
        other => group_from_json(other, dir)?,
    };
    let t = transversal_from_json(field(v, "T")?)?;
    let d = group.dim();
    let spec = group.spec().clone();
    let cut = group.law().cutoff();
    let cmap = field(v, "C")?
        .as_object()
        .ok_or_else(|| invalid("'C' maps element names to series"))?;
    for name in cmap.keys() {
        t.index_of(name)?;
    }
    let conj = (0..t.len())
        .map(|i| match cmap.get(t.name(i)) {
            Some(s) => tuple_from_json(&spec, d, cut, d, s),
            None => Ok(group.identity_series()),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut corrections = BTreeMap::new();
    if let Some(a) = v.get("A") {
        let a = a
            .as_object()
            .ok_or_else(|| invalid("'A' maps correction keys to series"))?;
        for (name, s) in a {
            corrections.insert(correction_key(&t, name)?, tuple_from_json(&spec, d, cut, d, s)?);
        }
    }
    let split = match v.get("split") {
        Some(b) => b.as_bool().ok_or_else(|| invalid("'split' must be a boolean"))?,
        None => v.get("A").is_none(),
    };
    TransversalData::new(group, t, conj, corrections, split)
}

fn read(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn parent(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub fn load_raw_law(path: &Path) -> Result<RawLaw> {
    raw_law_from_json(&read(path)?)
}

pub fn load_fgl(path: &Path) -> Result<FormalGroupLaw> {
    fgl_from_json(&read(path)?)
}

pub fn load_group(path: &Path) -> Result<StandardGroup> {
    group_from_json(&read(path)?, &parent(path))
}

pub fn load_extension(path: &Path) -> Result<TransversalData> {
    extension_from_json(&read(path)?, &parent(path))
}

/// Builtin law by name, for files and command lines alike.
pub fn builtin_law_json(name: BuiltinLaw, spec: &RingSpec, cutoff: u32) -> Result<Value> {
    Ok(fgl_to_json(&builtin_fgl(name, spec, cutoff)?, false))
}

/// Witness monomials are named in blocks of `d`: `X1..Xd, Y1.., Z1..`.
pub fn fgl_report_to_json(report: &FglReport, d: usize) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            let mut v = json!({ "axiom": c.axiom.to_string(), "passed": c.passed() });
            if let Some(w) = &c.witness {
                v["witness"] = json!({
                    "component": w.component + 1,
                    "monomial": w.monomial.render(&|v| crate::words::block_var_name(d, v)),
                });
            }
            v
        })
        .collect();
    json!({ "passed": report.passed(), "checks": checks })
}

fn cosets_json(t: &Transversal, cosets: &[usize]) -> Value {
    Value::Array(cosets.iter().map(|&c| Value::String(t.name(c).to_string())).collect())
}

pub fn h_element_to_json(data: &TransversalData, x: &crate::atlas::HElement) -> Value {
    json!({
        "coset": data.transversal().name(x.coset),
        "l": element_to_json(data.group(), &x.l),
    })
}

pub fn validation_to_json(data: &TransversalData, r: &ValidationReport) -> Value {
    let mode = match r.mode {
        ValidationMode::Exhaustive { level_m } => json!({ "exhaustive": { "M": level_m } }),
        ValidationMode::Sampled { samples, seed } => json!({ "sampled": { "n": samples, "seed": seed } }),
    };
    let mut v = json!({ "mode": mode, "elements": r.elements, "passed": r.passed() });
    if let Some(f) = &r.failure {
        let h = |x| h_element_to_json(data, x);
        let t = data.transversal();
        v["failure"] = match f {
            AxiomFailure::Table(defect) => {
                let detail = match defect {
                    TableDefect::Shape(s) => json!({ "shape": s }),
                    TableDefect::Identity { element } => json!({ "identity": t.name(*element) }),
                    TableDefect::Inverse { element } => json!({ "inverse": t.name(*element) }),
                    TableDefect::Associativity { a, b, c } => {
                        json!({ "associativity": [t.name(*a), t.name(*b), t.name(*c)] })
                    }
                };
                json!({ "kind": "coset-table", "witness": detail })
            }
            AxiomFailure::Identity { x } => json!({ "kind": "identity", "witness": [h(x)] }),
            AxiomFailure::Inverse { x } => json!({ "kind": "inverse", "witness": [h(x)] }),
            AxiomFailure::Associativity { x, y, z } => {
                json!({ "kind": "associativity", "witness": [h(x), h(y), h(z)] })
            }
        };
    }
    v
}

fn constant_json(data: &TransversalData, e: &CosetConstant) -> Value {
    let t = data.transversal();
    json!({
        "cosets": cosets_json(t, &e.cosets),
        "target": t.name(e.target),
        "constant": elems_to_json(data.group().spec(), &e.constant),
    })
}

fn witness_json(data: &TransversalData, w: &NonConstantWitness) -> Value {
    let t = data.transversal();
    json!({
        "cosets": cosets_json(t, &w.cosets),
        "target": t.name(w.target),
        "component": w.component + 1,
        "monomial": w.monomial.to_string(),
        "coefficient": elem_to_json(data.group().spec(), &w.coefficient),
    })
}

pub fn marginality_to_json(data: &TransversalData, word: &str, m: &Marginality) -> Value {
    match m {
        Marginality::Constant { entries, image_bound } => json!({
            "word": word,
            "status": "constant",
            "trivial": m.is_trivial(data),
            "entries": entries.iter().map(|e| constant_json(data, e)).collect::<Vec<_>>(),
            "image_bound": image_bound.to_string(),
        }),
        Marginality::NonConstant(w) => json!({
            "word": word,
            "status": "non-constant",
            "witness": witness_json(data, w),
        }),
    }
}

pub fn probe_to_json(data: &TransversalData, r: &ProbeReport) -> Value {
    let spec = data.group().spec();
    let base = spec.base().unwrap_or(spec);
    let grid: Vec<Value> = r.grid.iter().map(|a| elems_to_json(base, a)).collect();
    let mut m_l = Map::new();
    let levels: Vec<Value> = r
        .levels
        .iter()
        .map(|lv| match &lv.status {
            LevelStatus::NonConstant(w) => json!({
                "l": lv.l,
                "status": "non-constant",
                "witness": witness_json(data, w),
            }),
            LevelStatus::Constant(c) => {
                m_l.insert(
                    lv.l.to_string(),
                    Value::Array(c.members.iter().map(|&g| grid[g].clone()).collect()),
                );
                json!({
                    "l": lv.l,
                    "status": "constant",
                    "class": c.class.as_str(),
                    "law": c.is_law(),
                    "coherent": c.coherent.iter().all(|&b| b),
                    "constants": c.entries.iter().map(|e| constant_json(data, e)).collect::<Vec<_>>(),
                })
            }
        })
        .collect();
    json!({
        "word": r.word.to_string(),
        "lmax": r.lmax,
        "levels": levels,
        "grid": grid,
        "m_l": m_l,
        "min_l": r.min_l,
    })
}
