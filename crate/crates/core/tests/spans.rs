mod common;

use common::{build, raw_element, Shape};
use ddgk::linbasis::{
    element_to_vec, includes, span_contains, span_from, span_product, span_sum, Atom, Echelon, KSpan, SparseVec,
};
use ddgk::specio::presets;
use ddgk::{q, DdAlgebra, DdElement, RingElem};
use proptest::prelude::*;

/// Dimension of `s ∩ t` by Zassenhaus: reduce rows (u | u) and (v | 0).
fn intersection_dim(s: &KSpan, t: &KSpan) -> usize {
    let mut ech: Echelon<(u8, Atom)> = Echelon::new();
    let tagged = |row: &SparseVec<Atom>, tag: u8| -> SparseVec<(u8, Atom)> {
        row.iter().map(|(a, c)| ((tag, a.clone()), c.clone())).collect()
    };
    for row in s.rows() {
        let mut v = tagged(row, 0);
        v.extend(tagged(row, 1));
        ech.insert(v);
    }
    for row in t.rows() {
        ech.insert(tagged(row, 0));
    }
    ech.rows().iter().filter(|r| r.keys().next().unwrap().0 == 1).count()
}

fn dszsd_elems(n: usize) -> impl Strategy<Value = Vec<Vec<common::RawTerm>>> {
    let alg = presets::dszsd().algebra;
    prop::collection::vec(raw_element(&Shape::of(&alg), 3), 0..=n)
}

fn elems(alg: &DdAlgebra, raw: &[Vec<common::RawTerm>]) -> Vec<DdElement> {
    raw.iter().map(|r| build(alg, r)).collect()
}

#[test]
fn span_examples() {
    let alg = presets::dszsd().algebra;
    let zinv = alg.from_ring(RingElem::monomial(vec![-1], q(1)));
    let five = [alg.one(), alg.var(0), zinv.clone(), alg.d(0), alg.s(0)];
    assert_eq!(span_from(&five).dim(), 5);
    let x = alg.var(0);
    assert_eq!(span_from(&[x.clone(), x.scale(&q(2))]).dim(), 1);
    assert_eq!(span_from(&[]).dim(), 0);

    let s = span_from(&[alg.one(), alg.var(0)]);
    assert!(span_contains(&s, &alg.var(0).add(&alg.scalar(q(3)))));
    assert!(!span_contains(&s, &alg.from_ring(alg.ring().var(0).pow(2))));
    assert!(span_contains(&s, &alg.zero()));

    let v = span_from(&[alg.one(), alg.var(0), zinv]);
    assert_eq!(span_product(&alg, &v, &v).unwrap().dim(), 5);
    let (xs, ys) = (span_from(&[alg.d(0)]), span_from(&[alg.s(0)]));
    let xy = span_product(&alg, &xs, &ys).unwrap();
    assert_eq!(xy, span_from(&[alg.mul_elem(&alg.var(0), &alg.mul_elem(&alg.s(0), &alg.d(0)))]));
    assert_eq!(span_product(&alg, &s, &span_from(&[alg.one()])).unwrap(), s);
    let vyx = span_product(&alg, &v, &span_product(&alg, &ys, &xs).unwrap()).unwrap();
    assert!(includes(&vyx, &xy));
    assert!(includes(&xs, &xs));
    assert!(!includes(&ys, &xs));
}

#[test]
fn zero_coefficients_never_stored() {
    let alg = presets::dszsd().algebra;
    let e = alg.var(0).sub(&alg.var(0));
    assert!(e.is_zero());
    assert!(element_to_vec(&e).is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rereduction_is_idempotent(raw in dszsd_elems(6)) {
        let alg = presets::dszsd().algebra;
        let s = span_from(&elems(&alg, &raw));
        prop_assert_eq!(s.rereduce(), s);
    }

    #[test]
    fn spans_ignore_input_order(raw in dszsd_elems(6).prop_flat_map(|v| (Just(v.clone()), Just(v).prop_shuffle()))) {
        let alg = presets::dszsd().algebra;
        prop_assert_eq!(span_from(&elems(&alg, &raw.0)), span_from(&elems(&alg, &raw.1)));
    }

    #[test]
    fn dimension_formula(a in dszsd_elems(5), b in dszsd_elems(5), shared in dszsd_elems(2)) {
        let alg = presets::dszsd().algebra;
        let shared = elems(&alg, &shared);
        let mut xs = elems(&alg, &a);
        xs.extend(shared.iter().cloned());
        let mut ys = elems(&alg, &b);
        ys.extend(shared);
        let (s, t) = (span_from(&xs), span_from(&ys));
        let sum = span_sum(&s, &t);
        prop_assert_eq!(sum.dim() + intersection_dim(&s, &t), s.dim() + t.dim());
        prop_assert!(includes(&sum, &s) && includes(&sum, &t));
    }

    #[test]
    fn product_is_associative(a in dszsd_elems(2), b in dszsd_elems(2), c in dszsd_elems(2)) {
        let alg = presets::dszsd().algebra;
        let (s, t, u) = (span_from(&elems(&alg, &a)), span_from(&elems(&alg, &b)), span_from(&elems(&alg, &c)));
        let left = span_product(&alg, &span_product(&alg, &s, &t).unwrap(), &u).unwrap();
        let right = span_product(&alg, &s, &span_product(&alg, &t, &u).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}
