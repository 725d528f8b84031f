//! Formal group laws: axiom checks, formal inverse, catalogue, transport.
//!
//! A `d`-dimensional law is a tuple of `d` series in `2d` variables, the
//! first `d` forming the X-block and the last `d` the Y-block.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mono::Monomial;
use crate::ring::{CoeffMap, RingSpec};
use crate::series::{Series, SeriesTuple};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    /// `F(X, 0) = X`
    RightUnit,
    /// `F(0, Y) = Y`
    LeftUnit,
    Associativity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::RightUnit => "F(X,0)=X",
            Axiom::LeftUnit => "F(0,Y)=Y",
            Axiom::Associativity => "F(F(X,Y),Z)=F(X,F(Y,Z))",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub component: usize,
    pub monomial: Monomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub witness: Option<Witness>,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FglReport {
    pub checks: Vec<AxiomCheck>,
}

impl FglReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed())
    }
}

fn law_dim(f: &SeriesTuple) -> Result<usize> {
    let d = f.len();
    if f.nvars() != 2 * d {
        return Err(Error::Shape(format!(
            "a {d}-dimensional law needs {} variables, got {}",
            2 * d,
            f.nvars()
        )));
    }
    if !f.has_zero_constant() {
        return Err(Error::Shape("law has a nonzero constant term".into()));
    }
    Ok(d)
}

fn check(axiom: Axiom, lhs: &SeriesTuple, rhs: &SeriesTuple) -> Result<AxiomCheck> {
    Ok(AxiomCheck {
        axiom,
        witness: lhs
            .first_difference(rhs)?
            .map(|(component, monomial)| Witness { component, monomial }),
    })
}

/// Symbolic check of the unit and associativity identities at truncation.
pub fn verify_fgl(f: &SeriesTuple) -> Result<FglReport> {
    let d = law_dim(f)?;
    let spec = f.spec();
    let cut = f.cutoff();
    let x = SeriesTuple::identity(spec, d, cut);
    let zero = Series::zero(spec, d, cut);

    let mut args: Vec<Series> = x.components().to_vec();
    args.extend(std::iter::repeat_n(zero.clone(), d));
    let right = check(Axiom::RightUnit, &f.compose_series(&args)?, &x)?;

    let mut args: Vec<Series> = vec![zero; d];
    args.extend(x.components().iter().cloned());
    let left = check(Axiom::LeftUnit, &f.compose_series(&args)?, &x)?;

    let n = 3 * d;
    let fxy = f.embed(n, 0)?;
    let fyz = f.embed(n, d)?;
    let vars = SeriesTuple::identity(spec, n, cut);
    let v = vars.components();
    let mut outer_l: Vec<Series> = fxy.components().to_vec();
    outer_l.extend(v[2 * d..].iter().cloned());
    let mut outer_r: Vec<Series> = v[..d].to_vec();
    outer_r.extend(fyz.components().iter().cloned());
    let assoc = check(
        Axiom::Associativity,
        &f.compose_series(&outer_l)?,
        &f.compose_series(&outer_r)?,
    )?;

    Ok(FglReport {
        checks: vec![right, left, assoc],
    })
}

/// The unique `I` with `I(0) = 0` and `F(X, I(X)) = 0`, solved one degree
/// at a time. The law must pass [`verify_fgl`].
pub fn formal_inverse(f: &SeriesTuple) -> Result<SeriesTuple> {
    let d = law_dim(f)?;
    let spec = f.spec().clone();
    let cut = f.cutoff();
    let x = SeriesTuple::identity(&spec, d, cut);
    for (j, comp) in f.components().iter().enumerate() {
        // the linear part must be X_j + Y_j
        for (v, expect) in [(j, 1), (d + j, 1)] {
            let m = Monomial::var(2 * d, v);
            if cut > 1 && comp.coeff(&m) != spec.from_int(expect) {
                return Err(Error::NotALaw(format!(
                    "linear part of component {} is not X{} + Y{}",
                    j + 1,
                    j + 1,
                    j + 1
                )));
            }
        }
    }
    let mut inv: Vec<Series> = x.components().iter().map(Series::neg).collect();
    for k in 2..cut {
        let f_k = SeriesTuple::new(f.components().iter().map(|c| c.truncate(k + 1)).collect())?;
        let mut args: Vec<Series> = x.components().iter().map(|c| c.truncate(k + 1)).collect();
        args.extend(inv.iter().map(|c| c.truncate(k + 1)));
        let residual = f_k.compose_series(&args)?;
        for (i, r) in residual.components().iter().enumerate() {
            let slice = r.homogeneous(k);
            if !slice.is_zero() {
                let full =
                    Series::from_terms(&spec, d, cut, slice.terms().iter().map(|(m, c)| (m.clone(), c.clone())))?;
                inv[i] = inv[i].sub(&full)?;
            }
        }
    }
    SeriesTuple::new(inv)
}

/// A verified formal group law with its cached formal inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalGroupLaw {
    law: SeriesTuple,
    inverse: SeriesTuple,
}

impl FormalGroupLaw {
    pub fn new(law: SeriesTuple) -> Result<Self> {
        let report = verify_fgl(&law)?;
        if let Some(fail) = report.first_failure() {
            return Err(Error::NotALaw(failure_message(fail)));
        }
        let inverse = formal_inverse(&law)?;
        Ok(FormalGroupLaw { law, inverse })
    }

    /// Accepts a law with a precomputed inverse, checking both.
    pub fn with_inverse(law: SeriesTuple, inverse: SeriesTuple) -> Result<Self> {
        let report = verify_fgl(&law)?;
        if let Some(fail) = report.first_failure() {
            return Err(Error::NotALaw(failure_message(fail)));
        }
        let d = law.len();
        if inverse.len() != d
            || inverse.nvars() != d
            || inverse.spec() != law.spec()
            || inverse.cutoff() != law.cutoff()
        {
            return Err(Error::Shape("inverse does not match the law's shape".into()));
        }
        let out = FormalGroupLaw { law, inverse };
        if !out.inverse.has_zero_constant() || !out.inverse_residual()?.is_zero() {
            return Err(Error::NotALaw("F(X, I(X)) != 0 for the given inverse".into()));
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.law.len()
    }

    pub fn spec(&self) -> &RingSpec {
        self.law.spec()
    }

    pub fn cutoff(&self) -> u32 {
        self.law.cutoff()
    }

    pub fn law(&self) -> &SeriesTuple {
        &self.law
    }

    pub fn inverse(&self) -> &SeriesTuple {
        &self.inverse
    }

    /// `F(X, I(X))`, zero for a valid law.
    pub fn inverse_residual(&self) -> Result<SeriesTuple> {
        let d = self.dim();
        let x = SeriesTuple::identity(self.spec(), d, self.cutoff());
        self.combine(&x, &self.inverse)
    }

    /// `F(I(X), X)`.
    pub fn left_inverse_residual(&self) -> Result<SeriesTuple> {
        let d = self.dim();
        let x = SeriesTuple::identity(self.spec(), d, self.cutoff());
        self.combine(&self.inverse, &x)
    }

    /// `F(a, b)` for two `d`-tuples over the same variables.
    pub fn combine(&self, a: &SeriesTuple, b: &SeriesTuple) -> Result<SeriesTuple> {
        if a.len() != self.dim() || b.len() != self.dim() {
            return Err(Error::Shape("law arguments must be d-tuples".into()));
        }
        let mut args: Vec<Series> = a.components().to_vec();
        args.extend(b.components().iter().cloned());
        self.law.compose_series(&args)
    }

    /// `I(a)`.
    pub fn invert(&self, a: &SeriesTuple) -> Result<SeriesTuple> {
        self.inverse.compose(a)
    }

    /// `F_phi` with inverse `I_phi`; both identities are re-checked.
    pub fn transport(&self, map: &CoeffMap) -> Result<FormalGroupLaw> {
        let law = self.law.transport(map)?;
        let inverse = self.inverse.transport(map)?;
        FormalGroupLaw::with_inverse(law, inverse)
    }
}

fn failure_message(fail: &AxiomCheck) -> String {
    let w = fail.witness.as_ref().unwrap();
    format!(
        "{} fails in component {} at {}",
        fail.axiom,
        w.component + 1,
        w.monomial
    )
}

/// Transports a law along a coefficient map.
pub fn transport_fgl(law: &FormalGroupLaw, map: &CoeffMap) -> Result<FormalGroupLaw> {
    law.transport(map)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinLaw {
    Additive(usize),
    Multiplicative,
    Heisenberg,
}

impl FromStr for BuiltinLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "additive" => Ok(BuiltinLaw::Additive(1)),
            "multiplicative" => Ok(BuiltinLaw::Multiplicative),
            "heisenberg" => Ok(BuiltinLaw::Heisenberg),
            _ => {
                let d = s
                    .strip_prefix("additive:")
                    .or_else(|| s.strip_prefix("additive(").and_then(|r| r.strip_suffix(')')))
                    .and_then(|r| r.parse::<usize>().ok())
                    .filter(|&d| d >= 1)
                    .ok_or_else(|| Error::Unknown(format!("law '{s}'")))?;
                Ok(BuiltinLaw::Additive(d))
            }
        }
    }
}

impl fmt::Display for BuiltinLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinLaw::Additive(d) => write!(f, "additive:{d}"),
            BuiltinLaw::Multiplicative => f.write_str("multiplicative"),
            BuiltinLaw::Heisenberg => f.write_str("heisenberg"),
        }
    }
}

impl BuiltinLaw {
    /// The law's series: additive `X+Y`, multiplicative `X+Y+XY`
    /// (`(1+x)(1+y)-1`), Heisenberg `(X1+Y1, X2+Y2, X3+Y3+X1Y2)` (upper
    /// unitriangular 3x3 matrices).
    pub fn series(self, spec: &RingSpec, cutoff: u32) -> SeriesTuple {
        let d = self.dim();
        let n = 2 * d;
        let v = |i: usize| Series::var(spec, n, cutoff, i);
        let comps: Vec<Series> = match self {
            BuiltinLaw::Additive(d) => (0..d).map(|i| v(i).add_unchecked(&v(d + i))).collect(),
            BuiltinLaw::Multiplicative => {
                vec![v(0).add_unchecked(&v(1)).add_unchecked(&v(0).mul_unchecked(&v(1)))]
            }
            BuiltinLaw::Heisenberg => vec![
                v(0).add_unchecked(&v(3)),
                v(1).add_unchecked(&v(4)),
                v(2).add_unchecked(&v(5)).add_unchecked(&v(0).mul_unchecked(&v(4))),
            ],
        };
        SeriesTuple::new(comps).expect("catalogue laws are well formed")
    }

    pub fn dim(self) -> usize {
        match self {
            BuiltinLaw::Additive(d) => d,
            BuiltinLaw::Multiplicative => 1,
            BuiltinLaw::Heisenberg => 3,
        }
    }
}

pub fn builtin_fgl(name: BuiltinLaw, spec: &RingSpec, cutoff: u32) -> Result<FormalGroupLaw> {
    FormalGroupLaw::new(name.series(spec, cutoff))
}
