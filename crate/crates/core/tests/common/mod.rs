#![allow(dead_code)]

use std::collections::BTreeMap;

use ddgk::ddalgebra::RdElement;
use ddgk::{q, DdAlgebra, DdElement, PbwMonomial, RingElem, RingSpec};
use proptest::prelude::*;

/// Raw data for one term `c * z^gamma * S^alpha D^beta`.
#[derive(Clone, Debug)]
pub struct RawTerm {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub ring: Vec<(Vec<i32>, i64)>,
}

/// Shape of an algebra, enough to build strategies without borrowing it.
#[derive(Clone, Debug)]
pub struct Shape {
    pub m: usize,
    pub n: usize,
    pub invertible: Vec<bool>,
}

impl Shape {
    pub fn of(alg: &DdAlgebra) -> Self {
        let ring = alg.ring();
        Shape { m: alg.m(), n: alg.n(), invertible: (0..ring.arity()).map(|t| ring.is_invertible(t)).collect() }
    }
}

pub fn raw_ring(invertible: &[bool], max_terms: usize) -> impl Strategy<Value = Vec<(Vec<i32>, i64)>> {
    let exps: Vec<BoxedStrategy<i32>> =
        invertible.iter().map(|&inv| if inv { (-2i32..=2).boxed() } else { (0i32..=2).boxed() }).collect();
    prop::collection::vec((exps, -4i64..=4), 1..=max_terms)
}

pub fn raw_term(shape: &Shape) -> impl Strategy<Value = RawTerm> {
    (
        prop::collection::vec(0u32..=2, shape.m),
        prop::collection::vec(0u32..=2, shape.n),
        raw_ring(&shape.invertible, 2),
    )
        .prop_map(|(alpha, beta, ring)| RawTerm { alpha, beta, ring })
}

pub fn raw_element(shape: &Shape, max_terms: usize) -> impl Strategy<Value = Vec<RawTerm>> {
    prop::collection::vec(raw_term(shape), 0..=max_terms)
}

pub fn build_ring(arity: usize, raw: &[(Vec<i32>, i64)]) -> RingElem {
    let mut acc = RingElem::zero(arity);
    for (exps, c) in raw {
        acc = &acc + &RingElem::monomial(exps.clone(), q(*c));
    }
    acc
}

pub fn build(alg: &DdAlgebra, raw: &[RawTerm]) -> DdElement {
    let mut acc = alg.zero();
    for t in raw {
        let c = build_ring(alg.ring().arity(), &t.ring);
        acc = acc.add(&DdElement::term(PbwMonomial::new(t.alpha.clone(), t.beta.clone()), c));
    }
    acc
}

/// `D^beta r` by moving one D letter at a time with `D_j u = u D_j + delta_j(u)`.
pub fn leibniz_stepwise(alg: &DdAlgebra, beta: &[u32], r: &RingElem) -> BTreeMap<Vec<u32>, RingElem> {
    let ring: &RingSpec = alg.ring();
    let p = alg.presentation();
    let n = alg.n();
    let mut cur: BTreeMap<Vec<u32>, RingElem> = BTreeMap::new();
    cur.insert(vec![0; n], r.clone());
    // Rightmost letters act first; D's commute so the letter order is free.
    for (j, &b) in beta.iter().enumerate() {
        for _ in 0..b {
            let mut next: BTreeMap<Vec<u32>, RingElem> = BTreeMap::new();
            let mut add = |k: Vec<u32>, v: RingElem| {
                let e = next.entry(k).or_insert_with(|| RingElem::zero(ring.arity()));
                *e = &*e + &v;
            };
            for (g, u) in &cur {
                let mut up = g.clone();
                up[j] += 1;
                add(up, u.clone());
                add(g.clone(), ring.apply_derivation(&p.delta[j], u).unwrap());
            }
            cur = next.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
    }
    cur.retain(|_, v| !v.is_zero());
    cur
}

pub fn rd_to_map(u: &RdElement) -> BTreeMap<Vec<u32>, RingElem> {
    u.terms().map(|(k, v)| (k.clone(), v.clone())).collect()
}

/// All `beta` with `|beta| <= bound` in `n` variables.
pub fn exponents_up_to(n: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                let used: u32 = v.iter().sum();
                (0..=bound - used).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
