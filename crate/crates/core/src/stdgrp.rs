//! Standard groups: the set `(m^N)^d` with multiplication given by a formal
//! group law. Elements are their coordinate tuples.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::fgl::FormalGroupLaw;
use crate::group::{FiniteGroup, Group};
use crate::ring::{Elem, RingSpec};
use crate::series::{Series, SeriesTuple};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(Vec<Elem>);

impl GroupElement {
    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Elem> {
        self.0
    }

    pub(crate) fn from_raw(coords: Vec<Elem>) -> Self {
        GroupElement(coords)
    }

    pub fn render(&self, spec: &RingSpec) -> String {
        let parts: Vec<String> = self.0.iter().map(|c| spec.format_elem(c)).collect();
        format!("({})", parts.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct StandardGroup {
    law: Arc<FormalGroupLaw>,
    level: u32,
    /// `F(I(Y), F(X, Y))` in `2d` variables, built on first use.
    conj_generic: Arc<OnceLock<SeriesTuple>>,
}

impl PartialEq for StandardGroup {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.law == other.law
    }
}

impl Eq for StandardGroup {}

impl StandardGroup {
    pub fn new(law: FormalGroupLaw, level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::Invalid("level N must be at least 1".into()));
        }
        Ok(StandardGroup {
            law: Arc::new(law),
            level,
            conj_generic: Arc::new(OnceLock::new()),
        })
    }

    pub fn law(&self) -> &FormalGroupLaw {
        &self.law
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.law.dim()
    }

    pub fn spec(&self) -> &RingSpec {
        self.law.spec()
    }

    pub fn element(&self, coords: Vec<Elem>) -> Result<GroupElement> {
        if coords.len() != self.dim() {
            return Err(Error::Shape(format!(
                "element has {} coordinates, group has dimension {}",
                coords.len(),
                self.dim()
            )));
        }
        let spec = self.spec();
        for (i, c) in coords.iter().enumerate() {
            if !spec.contains(c) {
                return Err(Error::Invalid(format!("coordinate {} is not in {spec}", i + 1)));
            }
            if !spec.valuation(c).at_least(self.level) {
                return Err(Error::OutsideMaximalIdeal(format!(
                    "coordinate {} = {} is not in m^{}",
                    i + 1,
                    spec.format_elem(c),
                    self.level
                )));
            }
        }
        Ok(GroupElement(coords))
    }

    pub fn parse_element(&self, coords: &[&str]) -> Result<GroupElement> {
        let spec = self.spec();
        let parsed = coords
            .iter()
            .map(|s| spec.parse_elem(s.trim()))
            .collect::<Result<Vec<_>>>()?;
        self.element(parsed)
    }

    /// Uniformly random element at full precision.
    pub fn random_element<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        GroupElement(
            (0..self.dim())
                .map(|_| self.spec().random_in_ideal(self.level, rng))
                .collect(),
        )
    }

    fn check_member(&self, x: &GroupElement) -> Result<()> {
        if x.0.len() != self.dim() {
            return Err(Error::Shape("element belongs to a group of another dimension".into()));
        }
        Ok(())
    }

    /// `F(x, y)` evaluated pointwise.
    pub fn g_mul(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check_member(x)?;
        self.check_member(y)?;
        let mut args = x.0.clone();
        args.extend(y.0.iter().cloned());
        let out = self.law.law().eval(&args)?;
        self.assert_level(&out)?;
        Ok(GroupElement(out))
    }

    pub fn g_inv(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check_member(x)?;
        let out = self.law.inverse().eval(&x.0)?;
        self.assert_level(&out)?;
        Ok(GroupElement(out))
    }

    pub fn g_pow(&self, x: &GroupElement, n: i64) -> Result<GroupElement> {
        self.check_member(x)?;
        Ok(Group::pow(self, x, n))
    }

    fn assert_level(&self, coords: &[Elem]) -> Result<()> {
        let spec = self.spec();
        if coords.iter().all(|c| spec.valuation(c).at_least(self.level)) {
            Ok(())
        } else {
            Err(Error::Invalid(format!("result left m^{}", self.level)))
        }
    }

    fn conj_generic(&self) -> &SeriesTuple {
        self.conj_generic.get_or_init(|| {
            let d = self.dim();
            let spec = self.spec();
            let cut = self.law.cutoff();
            let n = 2 * d;
            let vars = SeriesTuple::identity(spec, n, cut);
            let x = SeriesTuple::new(vars.components()[..d].to_vec()).unwrap();
            let y = SeriesTuple::new(vars.components()[d..].to_vec()).unwrap();
            let xy = self.law.combine(&x, &y).expect("shapes agree");
            let iy = self.law.invert(&y).expect("shapes agree");
            self.law.combine(&iy, &xy).expect("shapes agree")
        })
    }

    /// `C_g(X) = F(I(g), F(X, g))`, the series of `x -> g^-1 x g`.
    pub fn conj_series(&self, g: &GroupElement) -> Result<SeriesTuple> {
        self.check_member(g)?;
        let mut values: Vec<Option<Elem>> = vec![None; self.dim()];
        values.extend(g.0.iter().cloned().map(Some));
        self.conj_generic().partial_eval(&values)
    }

    /// Identity tuple `(X1..Xd)` in this group's ring and cutoff.
    pub fn identity_series(&self) -> SeriesTuple {
        SeriesTuple::identity(self.spec(), self.dim(), self.law.cutoff())
    }

    pub fn zero_series(&self, nvars: usize) -> Vec<Series> {
        vec![Series::zero(self.spec(), nvars, self.law.cutoff()); self.dim()]
    }

    /// Number of elements of `(m^N / m^M)^d`.
    pub fn quotient_size(&self, level_m: u32) -> u128 {
        let per = self.spec().quotient_size(self.level, level_m);
        (0..self.dim()).fold(1u128, |acc, _| acc.saturating_mul(per))
    }

    /// The finite group `(m^N / m^M)^d` with the induced operation.
    pub fn quotient(&self, level_m: u32, bound: u128) -> Result<QuotientGroup> {
        if level_m <= self.level {
            return Err(Error::Invalid(format!(
                "quotient level {level_m} must exceed the group level {}",
                self.level
            )));
        }
        let size = self.quotient_size(level_m);
        if size > bound {
            return Err(Error::BoundExceeded { size, bound });
        }
        let reps = self.spec().quotient_reps(self.level, level_m, bound)?;
        let mut elements = vec![Vec::new()];
        for _ in 0..self.dim() {
            let mut next = Vec::with_capacity(elements.len() * reps.len());
            for prefix in &elements {
                for r in &reps {
                    let mut v: Vec<Elem> = prefix.clone();
                    v.push(r.clone());
                    next.push(v);
                }
            }
            elements = next;
        }
        let mut elements: Vec<GroupElement> = elements.into_iter().map(GroupElement).collect();
        elements.sort();
        Ok(QuotientGroup {
            group: self.clone(),
            level_m,
            elements,
        })
    }

    pub fn reduce(&self, x: &GroupElement, level_m: u32) -> GroupElement {
        let spec = self.spec();
        GroupElement(x.0.iter().map(|c| spec.reduce_mod_power(c, level_m)).collect())
    }
}

impl Group for StandardGroup {
    type Element = GroupElement;

    fn identity(&self) -> GroupElement {
        GroupElement(vec![self.spec().zero(); self.dim()])
    }

    fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.g_mul(a, b).expect("elements of this group")
    }

    fn inv(&self, a: &GroupElement) -> GroupElement {
        self.g_inv(a).expect("element of this group")
    }
}

impl fmt::Display for StandardGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "standard group of dimension {} and level {} over {}",
            self.dim(),
            self.level,
            self.spec()
        )
    }
}

/// `(m^N / m^M)^d` with representatives reduced modulo `m^M`.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    group: StandardGroup,
    level_m: u32,
    elements: Vec<GroupElement>,
}

impl QuotientGroup {
    pub fn group(&self) -> &StandardGroup {
        &self.group
    }

    pub fn level_m(&self) -> u32 {
        self.level_m
    }

    pub fn reduce(&self, x: &GroupElement) -> GroupElement {
        self.group.reduce(x, self.level_m)
    }
}

impl Group for QuotientGroup {
    type Element = GroupElement;

    fn identity(&self) -> GroupElement {
        self.group.identity()
    }

    fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.reduce(&self.group.mul(a, b))
    }

    fn inv(&self, a: &GroupElement) -> GroupElement {
        self.reduce(&self.group.inv(a))
    }
}

impl FiniteGroup for QuotientGroup {
    fn elements(&self) -> &[GroupElement] {
        &self.elements
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::{builtin_fgl, BuiltinLaw};
    use crate::series::parse_series;

    fn group(law: BuiltinLaw, spec: RingSpec, cut: u32, level: u32) -> StandardGroup {
        StandardGroup::new(builtin_fgl(law, &spec, cut).unwrap(), level).unwrap()
    }

    fn padic(p: u64, k: u32) -> RingSpec {
        RingSpec::p_adic(p, k).unwrap()
    }

    #[test]
    fn mul_examples() {
        let g = group(BuiltinLaw::Additive(1), padic(3, 3), 4, 1);
        let x = g.parse_element(&["3"]).unwrap();
        assert_eq!(g.g_mul(&x, &x).unwrap(), g.parse_element(&["6"]).unwrap());

        let g = group(BuiltinLaw::Multiplicative, padic(2, 3), 4, 1);
        let x = g.parse_element(&["2"]).unwrap();
        assert_eq!(g.g_mul(&x, &x).unwrap(), g.identity());

        let g = group(BuiltinLaw::Heisenberg, padic(2, 4), 4, 1);
        let x = g.parse_element(&["2", "0", "0"]).unwrap();
        let y = g.parse_element(&["0", "2", "0"]).unwrap();
        assert_eq!(g.g_mul(&x, &y).unwrap(), g.parse_element(&["2", "2", "4"]).unwrap());
    }

    #[test]
    fn inverse_and_power_examples() {
        let g = group(BuiltinLaw::Additive(1), padic(3, 3), 4, 1);
        let x = g.parse_element(&["3"]).unwrap();
        assert_eq!(g.g_inv(&x).unwrap(), g.parse_element(&["24"]).unwrap());
        assert_eq!(g.g_pow(&x, 0).unwrap(), g.identity());

        let g = group(BuiltinLaw::Heisenberg, padic(2, 4), 4, 1);
        let x = g.parse_element(&["2", "2", "0"]).unwrap();
        assert_eq!(g.g_inv(&x).unwrap(), g.parse_element(&["-2", "-2", "4"]).unwrap());
        assert_eq!(g.g_pow(&x, -2).unwrap(), g.g_inv(&g.g_pow(&x, 2).unwrap()).unwrap());
    }

    #[test]
    fn level_enforced() {
        let g = group(BuiltinLaw::Additive(1), padic(3, 3), 4, 2);
        assert!(matches!(g.parse_element(&["3"]), Err(Error::OutsideMaximalIdeal(_))));
        assert!(g.parse_element(&["9"]).is_ok());
        assert!(g.parse_element(&["9", "9"]).is_err());
    }

    #[test]
    fn conj_series_abelian_is_identity() {
        for law in [BuiltinLaw::Additive(1), BuiltinLaw::Multiplicative] {
            let g = group(law, padic(3, 4), 5, 1);
            let x = g.parse_element(&["6"]).unwrap();
            assert_eq!(g.conj_series(&x).unwrap(), g.identity_series());
        }
    }

    #[test]
    fn heisenberg_conjugation() {
        // g^-1 x g for g = (a, b, c): third coordinate X3 + b*X1 - a*X2
        let spec = padic(2, 5);
        let g = group(BuiltinLaw::Heisenberg, spec.clone(), 5, 1);
        let h = g.parse_element(&["2", "4", "8"]).unwrap();
        let c = g.conj_series(&h).unwrap();
        let expect = SeriesTuple::new(vec![
            parse_series(&spec, 3, 5, "X1").unwrap(),
            parse_series(&spec, 3, 5, "X2").unwrap(),
            parse_series(&spec, 3, 5, "X3 + 4*X1 - 2*X2").unwrap(),
        ])
        .unwrap();
        assert_eq!(c, expect);
    }

    #[test]
    fn quotient_sizes() {
        let g = group(BuiltinLaw::Additive(1), padic(2, 5), 5, 1);
        assert_eq!(g.quotient(3, 1 << 20).unwrap().order(), 4);
        let g = group(BuiltinLaw::Heisenberg, padic(2, 5), 5, 1);
        assert_eq!(g.quotient(2, 1 << 20).unwrap().order(), 8);
        let g = group(BuiltinLaw::Additive(1), RingSpec::eq_char(3, 4).unwrap(), 5, 1);
        assert_eq!(g.quotient(2, 1 << 20).unwrap().order(), 3);
        let g = group(BuiltinLaw::Heisenberg, padic(2, 5), 5, 1);
        assert!(matches!(
            g.quotient(4, 100),
            Err(Error::BoundExceeded { size: 512, .. })
        ));
    }
}
