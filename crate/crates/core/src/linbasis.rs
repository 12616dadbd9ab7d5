//! Exact k-linear algebra over the atom basis `z^gamma S^alpha D^beta`.
//!
//! Spans are kept in canonical reduced echelon form: every row has pivot
//! coefficient 1 at its smallest atom, pivots strictly increase, and no row
//! has a nonzero entry in another row's pivot column.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Bound;

use num_traits::{One, Zero};

use crate::coeffring::{Exponents, Q, RingElem};
use crate::ddalgebra::{DdAlgebra, DdElement, PbwMonomial};
use crate::error::{Error, Result};

pub const DEFAULT_ATOM_BUDGET: usize = 200_000;

/// A k-basis element `z^gamma S^alpha D^beta`.
///
/// Ordered by `(|alpha|+|beta|, sum |gamma_j|, alpha, beta, gamma)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    degree: u32,
    ring_degree: u32,
    alpha: Vec<u32>,
    beta: Vec<u32>,
    gamma: Exponents,
}

impl Atom {
    pub fn new(gamma: Exponents, alpha: Vec<u32>, beta: Vec<u32>) -> Self {
        Atom {
            degree: alpha.iter().sum::<u32>() + beta.iter().sum::<u32>(),
            ring_degree: gamma.iter().map(|g| g.unsigned_abs()).sum(),
            alpha,
            beta,
            gamma,
        }
    }

    pub fn gamma(&self) -> &[i32] {
        &self.gamma
    }

    pub fn alpha(&self) -> &[u32] {
        &self.alpha
    }

    pub fn beta(&self) -> &[u32] {
        &self.beta
    }
}

pub type SparseVec<K> = BTreeMap<K, Q>;

/// Incremental semi-echelon basis over any ordered coordinate type.
///
/// Each stored row has coefficient 1 at its smallest coordinate (its pivot)
/// and no other row shares that pivot.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: Vec<SparseVec<K>>,
    pivots: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: Vec::new(), pivots: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Rows in insertion order.
    pub fn rows(&self) -> &[SparseVec<K>] {
        &self.rows
    }

    fn reduce_after(&self, v: SparseVec<K>, start: Option<&K>) -> SparseVec<K> {
        reduce_against(&self.rows, &self.pivots, v, start)
    }

    /// Remainder of `v` after elimination against the stored rows.
    pub fn reduce(&self, v: SparseVec<K>) -> SparseVec<K> {
        self.reduce_after(v, None)
    }

    pub fn contains(&self, v: SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let mut r = self.reduce(v);
        let Some((pivot, lead)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        if !lead.is_one() {
            let inv = lead.recip();
            for x in r.values_mut() {
                *x = &*x * &inv;
            }
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(r);
        true
    }

    /// Canonical reduced echelon rows, sorted by pivot.
    pub fn into_reduced(self) -> Vec<SparseVec<K>> {
        let mut order: Vec<(K, usize)> = self.pivots.iter().map(|(k, &i)| (k.clone(), i)).collect();
        order.sort_by(|a, b| b.0.cmp(&a.0));
        let mut done = Echelon::<K>::new();
        for (pivot, idx) in order {
            let row = done.reduce_after(self.rows[idx].clone(), Some(&pivot));
            done.pivots.insert(pivot, done.rows.len());
            done.rows.push(row);
        }
        done.rows.reverse();
        done.rows
    }
}

/// Eliminates pivot columns of `v` (those after `start`) in increasing order.
/// Stored rows only have entries after their pivot, so one pass suffices.
fn reduce_against<K: Ord + Clone>(
    rows: &[SparseVec<K>],
    pivots: &BTreeMap<K, usize>,
    mut v: SparseVec<K>,
    start: Option<&K>,
) -> SparseVec<K> {
    let mut cursor: Option<K> = start.cloned();
    loop {
        let lower = match &cursor {
            None => Bound::Unbounded,
            Some(c) => Bound::Excluded(c.clone()),
        };
        let hit = v
            .range((lower, Bound::Unbounded))
            .find(|(k, _)| pivots.contains_key(*k))
            .map(|(k, c)| (k.clone(), c.clone()));
        let Some((key, factor)) = hit else { break };
        for (k, x) in &rows[pivots[&key]] {
            sub_scaled(&mut v, k, &(&factor * x));
        }
        cursor = Some(key);
    }
    v
}

fn sub_scaled<K: Ord + Clone>(v: &mut SparseVec<K>, k: &K, amount: &Q) {
    use std::collections::btree_map::Entry;
    match v.entry(k.clone()) {
        Entry::Vacant(e) => {
            e.insert(-amount);
        }
        Entry::Occupied(mut e) => {
            let x = e.get() - amount;
            if x.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = x;
            }
        }
    }
}

/// Coordinates of an element in the atom basis.
pub fn element_to_vec(e: &DdElement) -> SparseVec<Atom> {
    let mut v = SparseVec::new();
    for (mono, c) in e.terms() {
        for (gamma, x) in c.terms() {
            v.insert(Atom::new(gamma.clone(), mono.alpha.clone(), mono.beta.clone()), x.clone());
        }
    }
    v
}

pub fn vec_to_element(v: &SparseVec<Atom>) -> DdElement {
    let mut e = DdElement::zero();
    for (atom, x) in v {
        let mono = PbwMonomial::new(atom.alpha.clone(), atom.beta.clone());
        e.add_term(mono, RingElem::monomial(atom.gamma.clone(), x.clone()));
    }
    e
}

/// A finite-dimensional k-subspace of the algebra in reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KSpan {
    rows: Vec<SparseVec<Atom>>,
    pivots: BTreeMap<Atom, usize>,
}

impl KSpan {
    pub fn zero() -> Self {
        KSpan { rows: Vec::new(), pivots: BTreeMap::new() }
    }

    pub fn from_echelon(ech: Echelon<Atom>) -> Self {
        let rows = ech.into_reduced();
        let pivots = rows.iter().enumerate().map(|(i, r)| (r.keys().next().unwrap().clone(), i)).collect();
        KSpan { rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<Atom>] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Atom> {
        self.rows.iter().map(|r| r.keys().next().unwrap())
    }

    /// Rows as algebra elements.
    pub fn basis(&self) -> Vec<DdElement> {
        self.rows.iter().map(vec_to_element).collect()
    }

    /// Semi-echelon view for further insertion.
    pub fn to_echelon(&self) -> Echelon<Atom> {
        Echelon { rows: self.rows.clone(), pivots: self.pivots.clone() }
    }

    pub fn reduce(&self, v: SparseVec<Atom>) -> SparseVec<Atom> {
        reduce_against(&self.rows, &self.pivots, v, None)
    }

    /// Re-runs the reduction on the stored rows.
    pub fn rereduce(&self) -> KSpan {
        span_from_vecs(self.rows.iter().cloned())
    }

    /// One row per line, pivot term first.
    pub fn dump(&self, ring: &crate::coeffring::RingSpec) -> String {
        let mut s = String::new();
        for row in &self.rows {
            let mut parts = Vec::new();
            for (atom, x) in row {
                let mono = PbwMonomial::new(atom.alpha.clone(), atom.beta.clone());
                let term = DdElement::term(mono, RingElem::monomial(atom.gamma.clone(), x.clone()));
                parts.push(term.render(ring));
            }
            s.push_str(&parts.join(" + "));
            s.push('\n');
        }
        s
    }
}

fn span_from_vecs(vs: impl IntoIterator<Item = SparseVec<Atom>>) -> KSpan {
    let mut ech = Echelon::new();
    for v in vs {
        ech.insert(v);
    }
    KSpan::from_echelon(ech)
}

pub fn span_from(elems: &[DdElement]) -> KSpan {
    span_from_vecs(elems.iter().map(element_to_vec))
}

pub fn span_contains(s: &KSpan, e: &DdElement) -> bool {
    s.reduce(element_to_vec(e)).is_empty()
}

/// `t ⊆ s`.
pub fn includes(s: &KSpan, t: &KSpan) -> bool {
    t.rows.iter().all(|r| s.reduce(r.clone()).is_empty())
}

pub fn span_sum(s: &KSpan, t: &KSpan) -> KSpan {
    let mut ech = s.to_echelon();
    for r in &t.rows {
        ech.insert(r.clone());
    }
    KSpan::from_echelon(ech)
}

/// Span of all products `u * v` of basis rows.
pub fn span_product(alg: &DdAlgebra, s: &KSpan, t: &KSpan) -> Result<KSpan> {
    span_product_with_budget(alg, s, t, DEFAULT_ATOM_BUDGET)
}

pub fn span_product_with_budget(alg: &DdAlgebra, s: &KSpan, t: &KSpan, budget: usize) -> Result<KSpan> {
    let left = s.basis();
    let right = t.basis();
    let mut registry: BTreeSet<Atom> = BTreeSet::new();
    let mut ech = Echelon::new();
    for u in &left {
        for v in &right {
            let w = element_to_vec(&alg.mul_elem(u, v));
            registry.extend(w.keys().cloned());
            if registry.len() > budget {
                return Err(Error::BudgetExceeded { budget });
            }
            ech.insert(w);
        }
    }
    Ok(KSpan::from_echelon(ech))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::q;
    use crate::specio::presets;

    #[test]
    fn echelon_normalizes_pivots() {
        let mut e: Echelon<u32> = Echelon::new();
        assert!(e.insert([(1, q(2)), (3, q(4))].into_iter().collect()));
        assert!(!e.insert([(1, q(1)), (3, q(2))].into_iter().collect()));
        assert!(e.insert([(3, q(5))].into_iter().collect()));
        let rows = e.into_reduced();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0], [(1, q(1))].into_iter().collect());
        assert_eq!(rows[1], [(3, q(1))].into_iter().collect());
    }

    #[test]
    fn span_examples() {
        let alg = presets::dszsd().algebra;
        let z = alg.var(0);
        let zi = alg.from_ring(alg.ring().unit_inverse(&alg.ring().var(0)).unwrap());
        let s = span_from(&[alg.one(), z.clone(), zi, alg.d(0), alg.s(0)]);
        assert_eq!(s.dim(), 5);
        let x = alg.s(0);
        assert_eq!(span_from(&[x.clone(), x.scale(&q(2))]).dim(), 1);
        assert_eq!(span_from(&[]).dim(), 0);

        let one_z = span_from(&[alg.one(), z.clone()]);
        assert!(span_contains(&one_z, &z.add(&alg.scalar(q(3)))));
        assert!(!span_contains(&one_z, &alg.mul_elem(&z, &z)));
        assert!(span_contains(&one_z, &alg.zero()));
        assert!(span_contains(&KSpan::zero(), &alg.zero()));
    }

    #[test]
    fn product_examples() {
        let alg = presets::dszsd().algebra;
        let x = span_from(&[alg.d(0)]);
        let y = span_from(&[alg.s(0)]);
        let xy = span_product(&alg, &x, &y).unwrap();
        assert_eq!(xy.dim(), 1);
        let zsd = alg.mul_elem(&alg.var(0), &alg.basis(vec![1], vec![1]));
        assert!(span_contains(&xy, &zsd));

        let zi = alg.from_ring(alg.ring().unit_inverse(&alg.ring().var(0)).unwrap());
        let v = span_from(&[alg.one(), alg.var(0), zi]);
        assert_eq!(span_product(&alg, &v, &v).unwrap().dim(), 5);
        assert_eq!(span_product(&alg, &v, &span_from(&[alg.one()])).unwrap(), v);

        let yx = span_product(&alg, &y, &x).unwrap();
        let vyx = span_product(&alg, &v, &yx).unwrap();
        assert!(includes(&vyx, &xy));
        assert!(includes(&x, &x));
        assert!(!includes(&y, &x));
    }

    #[test]
    fn budget_is_enforced() {
        let alg = presets::dszsd().algebra;
        let v = span_from(&[alg.one(), alg.var(0), alg.d(0), alg.s(0)]);
        assert_eq!(span_product_with_budget(&alg, &v, &v, 3), Err(Error::BudgetExceeded { budget: 3 }));
    }

    #[test]
    fn dump_has_one_line_per_row() {
        let alg = presets::dszsd().algebra;
        let s = span_from(&[alg.d(0).add(&alg.s(0)), alg.one()]);
        let text = s.dump(alg.ring());
        assert_eq!(text, "1\n1 * D1 + 1 * S1\n");
    }
}
