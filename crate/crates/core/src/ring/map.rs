//! Local ring homomorphisms used to transport coefficients.

use std::fmt;

use super::{Elem, RingKind, RingSpec, Valuation};
use crate::error::{Error, Result};

/// The specialisation `s_a : P[[t1..tm]] -> P`, `t_i -> a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specialisation {
    source: RingSpec,
    point: Vec<Elem>,
}

impl Specialisation {
    /// Every point entry must lie in the maximal ideal of the base. The
    /// truncation at t-degree `Dt` must also be killed by the point, i.e.
    /// `Dt * v(a_i) >= K`, otherwise `s_a` is not well defined on the
    /// truncated ring.
    pub fn new(source: &RingSpec, point: Vec<Elem>) -> Result<Self> {
        let base = source
            .base()
            .ok_or_else(|| Error::Map(format!("specialisation needs a nested ring, got {source}")))?;
        if point.len() != source.t_vars() {
            return Err(Error::Map(format!(
                "point has {} entries, ring has {} variables",
                point.len(),
                source.t_vars()
            )));
        }
        let dt = source.t_cutoff().unwrap();
        for (i, a) in point.iter().enumerate() {
            if !base.contains(a) {
                return Err(Error::Map(format!("point entry {} is not an element of {base}", i + 1)));
            }
            match base.valuation(a) {
                Valuation::Finite(0) => {
                    return Err(Error::OutsideMaximalIdeal(format!(
                        "point entry {} = {} is a unit",
                        i + 1,
                        base.format_elem(a)
                    )))
                }
                Valuation::Finite(v) if v.saturating_mul(dt) < base.nilpotency() => {
                    return Err(Error::Map(format!(
                        "point entry {} has valuation {v}; t-degree cutoff {dt} needs valuation >= {}",
                        i + 1,
                        base.nilpotency().div_ceil(dt)
                    )))
                }
                _ => {}
            }
        }
        Ok(Specialisation {
            source: source.clone(),
            point,
        })
    }

    pub fn parse(source: &RingSpec, entries: &[&str]) -> Result<Self> {
        let base = source
            .base()
            .ok_or_else(|| Error::Map(format!("specialisation needs a nested ring, got {source}")))?;
        let point = entries.iter().map(|s| base.parse_elem(s)).collect::<Result<Vec<_>>>()?;
        Self::new(source, point)
    }

    pub fn source(&self) -> &RingSpec {
        &self.source
    }

    pub fn target(&self) -> &RingSpec {
        self.source.base().unwrap()
    }

    pub fn point(&self) -> &[Elem] {
        &self.point
    }

    pub fn apply(&self, e: &Elem) -> Elem {
        let base = self.target();
        let Elem::Nested(map) = e else {
            panic!("specialisation applied to a non-nested element");
        };
        let dt = self.source.t_cutoff().unwrap() as usize;
        let powers: Vec<Vec<Elem>> = self
            .point
            .iter()
            .map(|a| {
                let mut v = vec![base.one()];
                for j in 1..dt {
                    v.push(base.mul(&v[j - 1], a));
                }
                v
            })
            .collect();
        let mut acc = base.zero();
        for (mono, c) in map {
            let mut term = c.clone();
            for (i, &ex) in mono.exps().iter().enumerate() {
                if ex > 0 {
                    term = base.mul(&term, &powers[i][ex as usize]);
                }
            }
            acc = base.add(&acc, &term);
        }
        acc
    }
}

impl fmt::Display for Specialisation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = self.target();
        let parts: Vec<String> = self.point.iter().map(|a| base.format_elem(a)).collect();
        write!(f, "s_({})", parts.join(","))
    }
}

/// Coefficient maps supported by series transport.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffMap {
    Identity,
    Specialise(Specialisation),
    /// Reduction to a coarser truncation of the same ring: lower `K`
    /// (`K = 1` is the residue map mod p) and, for nested rings, lower `Dt`.
    Reduce(RingSpec),
}

impl CoeffMap {
    pub fn target(&self, source: &RingSpec) -> Result<RingSpec> {
        match self {
            CoeffMap::Identity => Ok(source.clone()),
            CoeffMap::Specialise(s) => {
                if s.source() != source {
                    return Err(Error::Map(format!(
                        "specialisation is defined on {}, not {source}",
                        s.source()
                    )));
                }
                Ok(s.target().clone())
            }
            CoeffMap::Reduce(target) => {
                check_reduction(source, target)?;
                Ok(target.clone())
            }
        }
    }

    /// Applies the map to a payload of `source`. Call [`CoeffMap::target`]
    /// first to validate the domain.
    pub fn apply(&self, source: &RingSpec, e: &Elem) -> Elem {
        match self {
            CoeffMap::Identity => e.clone(),
            CoeffMap::Specialise(s) => s.apply(e),
            CoeffMap::Reduce(target) => reduce_to(source, target, e),
        }
    }
}

fn check_reduction(source: &RingSpec, target: &RingSpec) -> Result<()> {
    let bad = || Error::Map(format!("{target} is not a coarser truncation of {source}"));
    if source.kind() != target.kind() || source.p() != target.p() {
        return Err(bad());
    }
    match source.kind() {
        RingKind::PAdic | RingKind::EqChar => {
            if target.precision() > source.precision() {
                return Err(bad());
            }
        }
        RingKind::Nested => {
            check_reduction(source.base().unwrap(), target.base().unwrap())?;
            if source.t_vars() != target.t_vars() || target.t_cutoff() > source.t_cutoff() {
                return Err(bad());
            }
        }
    }
    Ok(())
}

fn reduce_to(source: &RingSpec, target: &RingSpec, e: &Elem) -> Elem {
    match e {
        Elem::Residue(_) => target.from_int(i128::from(source.residue_value(e).unwrap())),
        Elem::Poly(c) => Elem::Poly(c[..target.precision() as usize].to_vec()),
        Elem::Nested(map) => {
            let (sb, tb) = (source.base().unwrap(), target.base().unwrap());
            let dt = target.t_cutoff().unwrap();
            Elem::Nested(
                map.iter()
                    .filter(|(m, _)| m.degree() < dt)
                    .map(|(m, c)| (m.clone(), reduce_to(sb, tb, c)))
                    .filter(|(_, c)| !tb.is_zero(c))
                    .collect(),
            )
        }
    }
}
