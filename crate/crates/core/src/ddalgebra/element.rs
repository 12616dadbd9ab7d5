use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Zero;

use crate::coeffring::{Q, RingElem, RingSpec};

/// Exponents of a basis monomial `S^alpha D^beta`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbwMonomial {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

impl PbwMonomial {
    pub fn new(alpha: Vec<u32>, beta: Vec<u32>) -> Self {
        PbwMonomial { alpha, beta }
    }

    pub fn one(m: usize, n: usize) -> Self {
        PbwMonomial { alpha: vec![0; m], beta: vec![0; n] }
    }

    pub fn degree(&self) -> u32 {
        self.alpha.iter().sum::<u32>() + self.beta.iter().sum::<u32>()
    }

    pub fn is_one(&self) -> bool {
        self.degree() == 0
    }

    /// Rendering order: total degree, then alpha, then beta.
    pub fn render_cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.alpha.cmp(&other.alpha))
            .then_with(|| self.beta.cmp(&other.beta))
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (i, &a) in self.alpha.iter().enumerate() {
            push_power(&mut parts, 'S', i + 1, a);
        }
        for (j, &b) in self.beta.iter().enumerate() {
            push_power(&mut parts, 'D', j + 1, b);
        }
        parts.join("*")
    }
}

fn push_power(parts: &mut Vec<String>, letter: char, idx: usize, e: u32) {
    match e {
        0 => {}
        1 => parts.push(format!("{letter}{idx}")),
        _ => parts.push(format!("{letter}{idx}^{e}")),
    }
}

/// Element of R[D]: map from D-exponents to left coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RdElement {
    pub(crate) terms: BTreeMap<Vec<u32>, RingElem>,
}

impl RdElement {
    pub fn zero() -> Self {
        RdElement { terms: BTreeMap::new() }
    }

    pub fn term(beta: Vec<u32>, c: RingElem) -> Self {
        let mut e = Self::zero();
        e.add_term(beta, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &RingElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, beta: &[u32]) -> Option<&RingElem> {
        self.terms.get(beta)
    }

    pub fn add_term(&mut self, beta: Vec<u32>, c: RingElem) {
        add_into(&mut self.terms, beta, c);
    }

    pub fn add_assign(&mut self, other: &RdElement) {
        for (b, c) in &other.terms {
            self.add_term(b.clone(), c.clone());
        }
    }

    pub fn to_dd(&self, m: usize) -> DdElement {
        let mut out = DdElement::zero();
        for (b, c) in &self.terms {
            out.add_term(PbwMonomial::new(vec![0; m], b.clone()), c.clone());
        }
        out
    }
}

/// Element of the algebra in PBW normal form: sum of `r * S^alpha D^beta`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DdElement {
    pub(crate) terms: BTreeMap<PbwMonomial, RingElem>,
}

impl DdElement {
    pub fn zero() -> Self {
        DdElement { terms: BTreeMap::new() }
    }

    pub fn term(mono: PbwMonomial, c: RingElem) -> Self {
        let mut e = Self::zero();
        e.add_term(mono, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &RingElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mono: &PbwMonomial) -> Option<&RingElem> {
        self.terms.get(mono)
    }

    pub fn add_term(&mut self, mono: PbwMonomial, c: RingElem) {
        add_into(&mut self.terms, mono, c);
    }

    pub fn add(&self, other: &DdElement) -> DdElement {
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.add_term(mono.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> DdElement {
        DdElement { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &DdElement) -> DdElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> DdElement {
        if c.is_zero() {
            return DdElement::zero();
        }
        DdElement { terms: self.terms.iter().map(|(m, r)| (m.clone(), r.scale(c))).collect() }
    }

    /// Supports of the S-exponents.
    pub fn alpha_support(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.terms.keys().map(|m| &m.alpha)
    }

    /// Text rendering: terms by (degree, alpha, beta), `<coef> * S1^a*...*Dn^b`.
    pub fn render(&self, ring: &RingSpec) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut monos: Vec<_> = self.terms.iter().collect();
        monos.sort_by(|a, b| a.0.render_cmp(b.0));
        monos
            .into_iter()
            .map(|(mono, c)| {
                let mut coef = ring.render(c);
                if c.num_terms() > 1 {
                    coef = format!("({coef})");
                }
                if mono.is_one() {
                    coef
                } else {
                    format!("{coef} * {}", mono.render())
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, RingElem>, key: K, c: RingElem) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let sum = o.get() + &c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}
