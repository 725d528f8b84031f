mod oracle;

use std::collections::{BTreeMap, BTreeSet};

use oracle::{Heis, IntPoly};
use prostd_core::fgl::{builtin_fgl, BuiltinLaw, FormalGroupLaw};
use prostd_core::group::FiniteGroup;
use prostd_core::stdgrp::{GroupElement, StandardGroup};
use prostd_core::words::{parse_word, verbal_subgroup, word_image, word_series};
use prostd_core::{Elem, RingSpec, Series, DEFAULT_ENUM_BOUND};

fn residue_terms(s: &Series) -> BTreeMap<Vec<u32>, i128> {
    s.terms()
        .iter()
        .map(|(m, c)| match c {
            Elem::Residue(r) => (m.exps().iter().map(|&e| e as u32).collect(), *r as i128),
            other => panic!("expected a residue, got {other:?}"),
        })
        .collect()
}

fn assert_matches(lib: &[Series], oracle: &[IntPoly], q: i128) {
    assert_eq!(lib.len(), oracle.len());
    for (i, (s, o)) in lib.iter().zip(oracle).enumerate() {
        assert_eq!(residue_terms(s), o.reduce(q), "component {}", i + 1);
    }
}

fn heisenberg(p: u64, k: u32, cutoff: u32) -> FormalGroupLaw {
    builtin_fgl(BuiltinLaw::Heisenberg, &RingSpec::p_adic(p, k).unwrap(), cutoff).unwrap()
}

#[test]
fn commutator_series_matches_matrix_oracle() {
    for (p, k) in [(2, 5), (3, 4), (5, 3)] {
        let law = heisenberg(p, k, 6);
        let ws = word_series(&parse_word("[x1,x2]").unwrap(), &law).unwrap();
        let q = (p as i128).pow(k);
        assert_matches(ws.series.components(), &oracle::heisenberg_commutator(), q);
    }
}

#[test]
fn heisenberg_inverse_matches_matrix_oracle() {
    let law = heisenberg(3, 5, 8);
    assert_matches(law.inverse().components(), &oracle::heisenberg_inverse(), 243);
}

#[test]
fn conjugation_series_matches_matrix_oracle() {
    let law = heisenberg(2, 6, 6);
    let g = StandardGroup::new(law, 1).unwrap();
    for coords in [[2, 4, 8], [6, 2, 10], [0, 0, 2]] {
        let x = g
            .parse_element(
                &coords
                    .map(|c| c.to_string())
                    .iter()
                    .map(String::as_str)
                    .collect::<Vec<_>>(),
            )
            .unwrap();
        let c = g.conj_series(&x).unwrap();
        assert_matches(
            c.components(),
            &oracle::heisenberg_conj_by(coords.map(|c| c as i128)),
            64,
        );
    }
}

#[test]
fn multiplicative_inverse_matches_geometric_series() {
    let cutoff = 10;
    let spec = RingSpec::p_adic(3, 6).unwrap();
    let law = builtin_fgl(BuiltinLaw::Multiplicative, &spec, cutoff).unwrap();
    let inv = residue_terms(&law.inverse().components()[0]);
    let expect: BTreeMap<Vec<u32>, i128> = oracle::geometric_inverse(cutoff as usize)
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c != 0)
        .map(|(k, c)| (vec![k as u32], c.rem_euclid(729)))
        .collect();
    assert_eq!(inv, expect);
}

fn to_heis(x: &GroupElement, q: i128) -> Heis {
    let v: Vec<i128> = x
        .coords()
        .iter()
        .map(|c| match c {
            Elem::Residue(r) => (*r as i128).rem_euclid(q),
            other => panic!("expected a residue, got {other:?}"),
        })
        .collect();
    Heis {
        a: v[0],
        b: v[1],
        c: v[2],
    }
}

fn quotient_against_naive(m: u32) {
    let law = heisenberg(2, 5, 5);
    let g = StandardGroup::new(law, 1).unwrap();
    let quot = g.quotient(m, DEFAULT_ENUM_BOUND).unwrap();
    let q = 1i128 << m;
    let naive = oracle::heis_quotient(2, 1, m);
    assert_eq!(quot.order(), naive.len());
    let lib_elems: BTreeSet<Heis> = quot.elements().iter().map(|x| to_heis(x, q)).collect();
    assert_eq!(lib_elems, naive.iter().copied().collect());

    let w = parse_word("[x1,x2]").unwrap();
    let image: BTreeSet<Heis> = word_image(&w, &quot, DEFAULT_ENUM_BOUND)
        .unwrap()
        .iter()
        .map(|x| to_heis(x, q))
        .collect();
    let mut naive_image = BTreeSet::new();
    for &x in &naive {
        for &y in &naive {
            naive_image.insert(oracle::heis_commutator(x, y, q));
        }
    }
    assert_eq!(image, naive_image);

    let verbal: BTreeSet<Heis> = verbal_subgroup(&w, &quot, DEFAULT_ENUM_BOUND)
        .unwrap()
        .iter()
        .map(|x| to_heis(x, q))
        .collect();
    assert_eq!(verbal, oracle::heis_closure(&naive_image, q));
}

#[test]
fn heisenberg_quotient_m3_matches_naive_enumeration() {
    quotient_against_naive(3);
}

#[test]
fn heisenberg_quotient_m4_matches_naive_enumeration() {
    quotient_against_naive(4);
}

#[test]
fn naive_oracle_is_a_group() {
    let q = 16;
    let elems = oracle::heis_quotient(2, 1, 4);
    let e = Heis { a: 0, b: 0, c: 0 };
    for &x in elems.iter().step_by(7) {
        assert_eq!(oracle::heis_mul(x, e, q), x);
        for &y in elems.iter().step_by(11) {
            for &z in elems.iter().step_by(13) {
                let l = oracle::heis_mul(oracle::heis_mul(x, y, q), z, q);
                let r = oracle::heis_mul(x, oracle::heis_mul(y, z, q), q);
                assert_eq!(l, r);
            }
        }
    }
}
