use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prostd_core::atlas::{builtin_extension, coset_word_series, transport_atlas, BuiltinExtension, HElement};
use prostd_core::fgl::{builtin_fgl, verify_fgl, BuiltinLaw};
use prostd_core::json::{series_from_json, series_to_json};
use prostd_core::specialise::{grid, kernel_grid_test, ExactPoly, KernelVerdict};
use prostd_core::stdgrp::StandardGroup;
use prostd_core::words::{eval_word, parse_word, word_series, Letter, WordExpr};
use prostd_core::{
    CoeffMap, Elem, Monomial, RingSpec, Series, SeriesTuple, Specialisation, Valuation, DEFAULT_ENUM_BOUND,
};

fn specs() -> Vec<RingSpec> {
    vec![
        RingSpec::p_adic(2, 5).unwrap(),
        RingSpec::p_adic(3, 4).unwrap(),
        RingSpec::eq_char(2, 5).unwrap(),
        RingSpec::eq_char(3, 3).unwrap(),
        RingSpec::nested(RingSpec::p_adic(2, 3).unwrap(), 2, 3).unwrap(),
        RingSpec::nested(RingSpec::eq_char(3, 2).unwrap(), 1, 4).unwrap(),
    ]
}

fn spec_and_rng() -> impl Strategy<Value = (RingSpec, ChaCha8Rng)> {
    (0..specs().len(), any::<u64>()).prop_map(|(i, seed)| (specs()[i].clone(), ChaCha8Rng::seed_from_u64(seed)))
}

fn random_series(spec: &RingSpec, nvars: usize, cutoff: u32, min_deg: u32, rng: &mut ChaCha8Rng) -> Series {
    let count = rng.gen_range(0..6);
    let terms: Vec<(Monomial, Elem)> = (0..count)
        .map(|_| {
            let deg = rng.gen_range(min_deg..cutoff);
            let mut exps = vec![0u16; nvars];
            for _ in 0..deg {
                exps[rng.gen_range(0..nvars)] += 1;
            }
            (Monomial::new(exps), spec.random_in_ideal(0, rng))
        })
        .collect();
    Series::from_terms(spec, nvars, cutoff, terms).unwrap()
}

fn random_tuple(
    spec: &RingSpec,
    len: usize,
    nvars: usize,
    cutoff: u32,
    min_deg: u32,
    rng: &mut ChaCha8Rng,
) -> SeriesTuple {
    SeriesTuple::new(
        (0..len)
            .map(|_| random_series(spec, nvars, cutoff, min_deg, rng))
            .collect(),
    )
    .unwrap()
}

fn random_word(k: usize, len: usize, rng: &mut ChaCha8Rng) -> WordExpr {
    let letters = (0..len).map(|_| Letter {
        generator: rng.gen_range(0..k),
        inverse: rng.gen_bool(0.5),
    });
    WordExpr::new(k, letters).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms((spec, mut rng) in spec_and_rng()) {
        let a = spec.random_in_ideal(0, &mut rng);
        let b = spec.random_in_ideal(0, &mut rng);
        let c = spec.random_in_ideal(0, &mut rng);
        prop_assert_eq!(spec.add(&a, &b), spec.add(&b, &a));
        prop_assert_eq!(spec.mul(&a, &b), spec.mul(&b, &a));
        prop_assert_eq!(spec.mul(&spec.mul(&a, &b), &c), spec.mul(&a, &spec.mul(&b, &c)));
        prop_assert_eq!(spec.add(&spec.add(&a, &b), &c), spec.add(&a, &spec.add(&b, &c)));
        prop_assert_eq!(
            spec.mul(&a, &spec.add(&b, &c)),
            spec.add(&spec.mul(&a, &b), &spec.mul(&a, &c))
        );
        prop_assert!(spec.is_zero(&spec.add(&a, &spec.neg(&a))));
        prop_assert_eq!(spec.mul(&a, &spec.one()), a.clone());
        prop_assert!(spec.contains(&spec.mul(&a, &b)));
    }

    #[test]
    fn valuation_is_superadditive((spec, mut rng) in spec_and_rng(), la in 0u32..3, lb in 0u32..3) {
        let a = spec.random_in_ideal(la, &mut rng);
        let b = spec.random_in_ideal(lb, &mut rng);
        let (va, vb) = (spec.valuation(&a), spec.valuation(&b));
        prop_assert!(va.at_least(la) && vb.at_least(lb));
        let min = match (va.finite(), vb.finite()) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        if let Some(m) = min {
            prop_assert!(spec.valuation(&spec.add(&a, &b)).at_least(m));
        }
        if let (Some(x), Some(y)) = (va.finite(), vb.finite()) {
            prop_assert!(spec.valuation(&spec.mul(&a, &b)).at_least(x + y));
        }
        prop_assert_eq!(spec.valuation(&spec.zero()), Valuation::Infinite);
    }

    #[test]
    fn specialisation_is_a_ring_homomorphism(seed in any::<u64>(), which in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = [
            RingSpec::nested(RingSpec::p_adic(2, 4).unwrap(), 2, 4).unwrap(),
            RingSpec::nested(RingSpec::eq_char(3, 3).unwrap(), 1, 3).unwrap(),
        ][which].clone();
        let base = spec.base().unwrap().clone();
        let points = grid(&base, spec.t_vars(), 3, DEFAULT_ENUM_BOUND).unwrap();
        let s = Specialisation::new(&spec, points[rng.gen_range(0..points.len())].clone()).unwrap();
        let a = spec.random_in_ideal(0, &mut rng);
        let b = spec.random_in_ideal(0, &mut rng);
        prop_assert_eq!(s.apply(&spec.add(&a, &b)), base.add(&s.apply(&a), &s.apply(&b)));
        prop_assert_eq!(s.apply(&spec.mul(&a, &b)), base.mul(&s.apply(&a), &s.apply(&b)));
        prop_assert_eq!(s.apply(&spec.one()), base.one());
    }

    #[test]
    fn transport_commutes_with_composition(seed in any::<u64>(), reduce in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (spec, map) = if reduce {
            let spec = RingSpec::p_adic(3, 4).unwrap();
            (spec, CoeffMap::Reduce(RingSpec::p_adic(3, 2).unwrap()))
        } else {
            let spec = RingSpec::nested(RingSpec::p_adic(2, 4).unwrap(), 2, 4).unwrap();
            let points = grid(spec.base().unwrap(), 2, 3, DEFAULT_ENUM_BOUND).unwrap();
            let a = points[rng.gen_range(0..points.len())].clone();
            (spec.clone(), CoeffMap::Specialise(Specialisation::new(&spec, a).unwrap()))
        };
        let outer = random_tuple(&spec, 2, 2, 5, 0, &mut rng);
        let inner = random_tuple(&spec, 2, 3, 5, 1, &mut rng);
        let lhs = outer.compose(&inner).unwrap().transport(&map).unwrap();
        let rhs = outer.transport(&map).unwrap().compose(&inner.transport(&map).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_commutes_with_composition((spec, mut rng) in spec_and_rng()) {
        let cutoff = spec.nilpotency();
        let outer = random_tuple(&spec, 2, 2, cutoff, 0, &mut rng);
        let inner = random_tuple(&spec, 2, 2, cutoff, 1, &mut rng);
        let x: Vec<Elem> = (0..2).map(|_| spec.random_in_ideal(1, &mut rng)).collect();
        let composed = outer.compose(&inner).unwrap().eval(&x).unwrap();
        let stepwise = outer.eval(&inner.eval(&x).unwrap()).unwrap();
        prop_assert_eq!(composed, stepwise);
    }

    #[test]
    fn formal_inverse_is_two_sided(i in 0usize..4, (spec, _rng) in spec_and_rng()) {
        let name = [BuiltinLaw::Additive(2), BuiltinLaw::Multiplicative, BuiltinLaw::Heisenberg, BuiltinLaw::Additive(1)][i];
        let law = builtin_fgl(name, &spec, 5).unwrap();
        prop_assert!(verify_fgl(law.law()).unwrap().passed());
        prop_assert!(law.inverse_residual().unwrap().is_zero());
        prop_assert!(law.left_inverse_residual().unwrap().is_zero());
    }

    #[test]
    fn word_series_agrees_with_pointwise_evaluation(seed in any::<u64>(), k in 1usize..3, len in 0usize..6, law_ix in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = RingSpec::p_adic(2, 5).unwrap();
        let name = [BuiltinLaw::Heisenberg, BuiltinLaw::Multiplicative][law_ix];
        let g = StandardGroup::new(builtin_fgl(name, &spec, 5).unwrap(), 1).unwrap();
        let w = random_word(k, len, &mut rng);
        let ws = word_series(&w, g.law()).unwrap();
        let args: Vec<_> = (0..k).map(|_| g.random_element(&mut rng)).collect();
        let pointwise = eval_word(&w, &g, &args).unwrap();
        let coords: Vec<Vec<Elem>> = args.iter().map(|a| a.coords().to_vec()).collect();
        prop_assert_eq!(ws.eval(&coords).unwrap(), pointwise.coords().to_vec());
    }

    #[test]
    fn coset_series_agrees_with_extension_product(seed in any::<u64>(), k in 1usize..3, len in 1usize..5, case in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = RingSpec::p_adic(2, 5).unwrap();
        let (law, ext) = [
            (BuiltinLaw::Additive(2), BuiltinExtension::C2Inverse),
            (BuiltinLaw::Multiplicative, BuiltinExtension::C2Inverse),
            (BuiltinLaw::Heisenberg, BuiltinExtension::C2Sign(vec![true, true, false])),
        ][case].clone();
        let g = StandardGroup::new(builtin_fgl(law, &spec, 5).unwrap(), 1).unwrap();
        let data = builtin_extension(&ext, g).unwrap();
        let w = random_word(k, len, &mut rng);
        let args: Vec<HElement> = (0..k).map(|_| data.random_element(&mut rng)).collect();
        let cosets: Vec<usize> = args.iter().map(|h| h.coset).collect();
        let cs = coset_word_series(&w, &data, &cosets).unwrap();
        let value = eval_word(&w, &data, &args).unwrap();
        let coords: Vec<Vec<Elem>> = args.iter().map(|a| a.l.coords().to_vec()).collect();
        prop_assert_eq!(cs.target, value.coset);
        prop_assert_eq!(cs.series.eval(&coords).unwrap(), value.l.coords().to_vec());
    }

    #[test]
    fn coset_series_is_natural_under_specialisation(seed in any::<u64>(), t0 in 0usize..2, t1 in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = RingSpec::nested(RingSpec::eq_char(2, 3).unwrap(), 2, 3).unwrap();
        let g = StandardGroup::new(builtin_fgl(BuiltinLaw::Multiplicative, &spec, 4).unwrap(), 1).unwrap();
        let data = builtin_extension(&BuiltinExtension::C2Inverse, g).unwrap();
        let points = grid(spec.base().unwrap(), 2, 2, DEFAULT_ENUM_BOUND).unwrap();
        let s = Specialisation::new(&spec, points[rng.gen_range(0..points.len())].clone()).unwrap();
        let map = CoeffMap::Specialise(s);
        let w = parse_word("x1^2 [x1,x2]").unwrap();
        let here = coset_word_series(&w, &data, &[t0, t1]).unwrap();
        let there = coset_word_series(&w, &transport_atlas(&data, &map).unwrap(), &[t0, t1]).unwrap();
        prop_assert_eq!(here.target, there.target);
        prop_assert_eq!(here.series.series.transport(&map).unwrap(), there.series.series);
    }

    #[test]
    fn kernel_test_matches_coefficientwise_zero(
        terms in proptest::collection::vec(((0u32..4, 0u32..4), -20i128..20), 0..8),
        cancel in any::<bool>(),
    ) {
        let mut all: Vec<(Vec<u32>, i128)> = terms.iter().map(|&((a, b), c)| (vec![a, b], c)).collect();
        if cancel {
            all.extend(terms.iter().map(|&((a, b), c)| (vec![a, b], -c)));
        }
        let c = ExactPoly::from_terms(2, all).unwrap();
        let axis: Vec<i128> = vec![0, 1, 2, 3];
        let verdict = kernel_grid_test(&c, &[axis.clone(), axis]).unwrap();
        prop_assert_eq!(verdict == KernelVerdict::Zero, c.is_zero());
        if let KernelVerdict::NonZero { witness, value } = verdict {
            prop_assert_eq!(c.eval(&witness).unwrap(), value);
            prop_assert_ne!(value, 0);
        }
    }

    #[test]
    fn series_json_round_trip((spec, mut rng) in spec_and_rng()) {
        let s = random_series(&spec, 3, 5, 0, &mut rng);
        let back = series_from_json(&spec, 3, 5, &series_to_json(&s)).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn word_display_round_trips(seed in any::<u64>(), k in 1usize..4, len in 0usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(k, len, &mut rng);
        if w.is_empty() {
            prop_assert!(parse_word(&w.to_string()).is_err());
        } else {
            let back = parse_word(&w.to_string()).unwrap();
            prop_assert_eq!(back.letters(), w.letters());
        }
        prop_assert!(w.concat(&w.inverse()).is_empty());
    }

    #[test]
    fn standard_group_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = RingSpec::eq_char(3, 4).unwrap();
        let g = StandardGroup::new(builtin_fgl(BuiltinLaw::Heisenberg, &spec, 4).unwrap(), 1).unwrap();
        let [x, y, z] = [0, 1, 2].map(|_| g.random_element(&mut rng));
        let xy_z = g.g_mul(&g.g_mul(&x, &y).unwrap(), &z).unwrap();
        let x_yz = g.g_mul(&x, &g.g_mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        let e = g.g_mul(&x, &g.g_inv(&x).unwrap()).unwrap();
        prop_assert!(e.coords().iter().all(|c| spec.is_zero(c)));
        let conj = g.conj_series(&y).unwrap().eval(x.coords()).unwrap();
        let direct = g.g_mul(&g.g_mul(&g.g_inv(&y).unwrap(), &x).unwrap(), &y).unwrap();
        prop_assert_eq!(conj, direct.coords().to_vec());
    }
}
