//! PBW normal-form arithmetic for differential difference algebras.
//!
//! An element is stored as a sum of `r * S^alpha * D^beta` with coefficients
//! on the left. Products are rewritten with three rules:
//!
//! * `D^beta r = sum_{gamma <= beta} binom(beta, gamma) delta^(beta - gamma)(r) D^gamma`
//! * `S_i r = sigma_i(r) S_i`
//! * `D_l S_j = S_j sigma_j(D_l)` with `sigma_j(D_l) = sum_t a_{j,l,t} D_t`
//!
//! S's commute among themselves, as do D's.

mod element;
mod presentation;
mod validate;

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::binomial;

pub use element::{DdElement, PbwMonomial, RdElement};
pub use presentation::DdPresentation;
pub use validate::{CheckResult, ValidationReport};

use crate::coeffring::{Q, RingElem, RingMap, RingSpec};
use crate::error::{Error, Result};

/// One letter of a word in the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Letter {
    Ring(RingElem),
    /// `S_i`, zero-based.
    S(usize),
    /// `D_j`, zero-based.
    D(usize),
}

#[derive(Default)]
struct Caches {
    /// Images of the ring variables under the composite sigma^alpha.
    composite: HashMap<Vec<u32>, Vec<RingElem>>,
    /// `prod_l sigma_j(D_l)^{eps_l}` in R[D], keyed by (j, eps).
    sigma_d_pow: HashMap<(usize, Vec<u32>), RdElement>,
    /// Normal form of `D^beta S^alpha` as `sum w_eps S^alpha D^eps`, keyed by (beta, alpha).
    d_past_s: HashMap<(Vec<u32>, Vec<u32>), RdElement>,
}

/// A validated presentation together with its multiplication engine.
pub struct DdAlgebra {
    p: DdPresentation,
    sigma_identity: bool,
    caches: Mutex<Caches>,
}

impl std::fmt::Debug for DdAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DdAlgebra").field("presentation", &self.p).finish()
    }
}

impl DdAlgebra {
    /// Validates `p` and builds the algebra; refuses invalid presentations.
    pub fn new(p: DdPresentation) -> Result<Self> {
        let report = validate_presentation(&p)?;
        if !report.is_valid() {
            return Err(Error::InvalidPresentation(report.failure_summary()));
        }
        Ok(Self::unchecked(p))
    }

    pub(crate) fn unchecked(p: DdPresentation) -> Self {
        let sigma_identity = p.sigma_ring.iter().all(RingMap::is_identity);
        DdAlgebra { p, sigma_identity, caches: Mutex::new(Caches::default()) }
    }

    pub fn presentation(&self) -> &DdPresentation {
        &self.p
    }

    pub fn ring(&self) -> &RingSpec {
        &self.p.ring
    }

    pub fn m(&self) -> usize {
        self.p.m
    }

    pub fn n(&self) -> usize {
        self.p.n
    }

    pub fn zero(&self) -> DdElement {
        DdElement::zero()
    }

    pub fn one(&self) -> DdElement {
        self.from_ring(self.p.ring.one())
    }

    pub fn from_ring(&self, r: RingElem) -> DdElement {
        DdElement::term(PbwMonomial::one(self.p.m, self.p.n), r)
    }

    pub fn scalar(&self, c: Q) -> DdElement {
        self.from_ring(self.p.ring.constant(c))
    }

    /// Ring variable `z_t` as an algebra element.
    pub fn var(&self, t: usize) -> DdElement {
        self.from_ring(self.p.ring.var(t))
    }

    /// `S_i` (zero-based).
    pub fn s(&self, i: usize) -> DdElement {
        self.basis(unit_vec(self.p.m, i), vec![0; self.p.n])
    }

    /// `D_j` (zero-based).
    pub fn d(&self, j: usize) -> DdElement {
        self.basis(vec![0; self.p.m], unit_vec(self.p.n, j))
    }

    /// `1 * S^alpha D^beta`.
    pub fn basis(&self, alpha: Vec<u32>, beta: Vec<u32>) -> DdElement {
        DdElement::term(PbwMonomial::new(alpha, beta), self.p.ring.one())
    }

    /// `sigma^alpha` on the coefficient ring, applying sigma_1 first.
    pub fn sigma_power_ring(&self, alpha: &[u32], r: &RingElem) -> RingElem {
        self.try_sigma_power_ring(alpha, r).expect("sigma on a validated presentation")
    }

    fn try_sigma_power_ring(&self, alpha: &[u32], r: &RingElem) -> Result<RingElem> {
        if self.sigma_identity || alpha.iter().all(|&a| a == 0) || r.as_constant().is_some() {
            return Ok(r.clone());
        }
        let images = self.composite_images(alpha)?;
        self.p.ring.substitute(&images, r)
    }

    fn composite_images(&self, alpha: &[u32]) -> Result<Vec<RingElem>> {
        if let Some(imgs) = self.caches.lock().unwrap().composite.get(alpha) {
            return Ok(imgs.clone());
        }
        let images = match alpha.iter().rposition(|&a| a > 0) {
            None => (0..self.p.ring.arity()).map(|t| self.p.ring.var(t)).collect(),
            Some(j) => {
                let mut prev = alpha.to_vec();
                prev[j] -= 1;
                let prev_images = self.composite_images(&prev)?;
                let sigma = &self.p.sigma_ring[j];
                prev_images
                    .iter()
                    .map(|im| self.p.ring.apply_endo(sigma, im))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        self.caches.lock().unwrap().composite.insert(alpha.to_vec(), images.clone());
        Ok(images)
    }

    /// `delta^kappa(r) = delta_1^{kappa_1} ... delta_n^{kappa_n}(r)`.
    pub fn delta_power(&self, kappa: &[u32], r: &RingElem) -> RingElem {
        let mut out = r.clone();
        for (j, &k) in kappa.iter().enumerate() {
            for _ in 0..k {
                if out.is_zero() {
                    return out;
                }
                out = self.p.ring.apply_derivation(&self.p.delta[j], &out).expect("derivation");
            }
        }
        out
    }

    /// Closed-form normal form of `D^beta r` in R[D].
    pub fn leibniz_move(&self, beta: &[u32], r: &RingElem) -> RdElement {
        let mut out = RdElement::zero();
        if r.is_zero() {
            return out;
        }
        if r.as_constant().is_some() || self.p.delta.iter().all(RingMap::is_zero) {
            out.add_term(beta.to_vec(), r.clone());
            return out;
        }
        // delta^kappa(r) for all kappa <= beta, built one derivation at a time.
        let mut table: HashMap<Vec<u32>, RingElem> = HashMap::new();
        for kappa in boxes_below(beta) {
            let value = match kappa.iter().position(|&k| k > 0) {
                None => r.clone(),
                Some(l) => {
                    let mut prev = kappa.clone();
                    prev[l] -= 1;
                    let base = &table[&prev];
                    if base.is_zero() {
                        base.clone()
                    } else {
                        self.p.ring.apply_derivation(&self.p.delta[l], base).expect("derivation")
                    }
                }
            };
            table.insert(kappa, value);
        }
        for gamma in boxes_below(beta) {
            let kappa: Vec<u32> = beta.iter().zip(&gamma).map(|(b, g)| b - g).collect();
            let d = &table[&kappa];
            if d.is_zero() {
                continue;
            }
            let mut coeff = BigInt::from(1);
            for (&b, &g) in beta.iter().zip(&gamma) {
                coeff *= binomial(BigInt::from(b), BigInt::from(g));
            }
            out.add_term(gamma, d.scale(&Q::from_integer(coeff)));
        }
        out
    }

    /// Product in the subalgebra R[D].
    pub fn rd_mul(&self, a: &RdElement, b: &RdElement) -> RdElement {
        let mut out = RdElement::zero();
        for (beta, c) in &a.terms {
            for (beta2, c2) in &b.terms {
                for (gamma, u) in &self.leibniz_move(beta, c2).terms {
                    out.add_term(add_exps(gamma, beta2), c * u);
                }
            }
        }
        out
    }

    /// `sigma_j(D_l)` as an element of R[D].
    fn sigma_d_linear(&self, j: usize, l: usize) -> RdElement {
        let mut out = RdElement::zero();
        for (t, a) in self.p.sigma_d[j][l].iter().enumerate() {
            out.add_term(unit_vec(self.p.n, t), a.clone());
        }
        out
    }

    /// `prod_l sigma_j(D_l)^{eps_l}`, multiplied in index order in R[D].
    fn sigma_d_power(&self, j: usize, eps: &[u32]) -> RdElement {
        let key = (j, eps.to_vec());
        if let Some(v) = self.caches.lock().unwrap().sigma_d_pow.get(&key) {
            return v.clone();
        }
        let value = match eps.iter().rposition(|&e| e > 0) {
            None => RdElement::term(vec![0; self.p.n], self.p.ring.one()),
            Some(l) => {
                let mut prev = eps.to_vec();
                prev[l] -= 1;
                let p = self.sigma_d_power(j, &prev);
                self.rd_mul(&p, &self.sigma_d_linear(j, l))
            }
        };
        self.caches.lock().unwrap().sigma_d_pow.insert(key, value.clone());
        value
    }

    /// Applies `sigma^alpha` (sigma_1 first) to an element of R[D], extending each
    /// sigma_i from R and the linear forms `sigma_i(D_l)` multiplicatively.
    pub fn sigma_power_on_rd(&self, alpha: &[u32], u: &RdElement) -> RdElement {
        let mut cur = u.clone();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                let mut next = RdElement::zero();
                for (beta, c) in &cur.terms {
                    let sc = self.p.ring.apply_endo(&self.p.sigma_ring[i], c).expect("sigma");
                    for (eps, w) in &self.sigma_d_power(i, beta).terms {
                        next.add_term(eps.clone(), &sc * w);
                    }
                }
                cur = next;
            }
        }
        cur
    }

    /// Normal form of `D^beta S^alpha` as `sum w_eps S^alpha D^eps`.
    fn d_past_s(&self, beta: &[u32], alpha: &[u32]) -> Result<RdElement> {
        let key = (beta.to_vec(), alpha.to_vec());
        if let Some(v) = self.caches.lock().unwrap().d_past_s.get(&key) {
            return Ok(v.clone());
        }
        let value = match alpha.iter().rposition(|&a| a > 0) {
            None => RdElement::term(beta.to_vec(), self.p.ring.one()),
            Some(j) => {
                let mut prev = alpha.to_vec();
                prev[j] -= 1;
                let before = self.d_past_s(beta, &prev)?;
                let mut out = RdElement::zero();
                for (eps, w) in &before.terms {
                    for (eta, p) in &self.sigma_d_power(j, eps).terms {
                        let moved = self.try_sigma_power_ring(alpha, p)?;
                        out.add_term(eta.clone(), w * &moved);
                    }
                }
                out
            }
        };
        self.caches.lock().unwrap().d_past_s.insert(key, value.clone());
        Ok(value)
    }

    fn mul_terms(
        &self,
        out: &mut DdElement,
        (m1, c1): (&PbwMonomial, &RingElem),
        (m2, c2): (&PbwMonomial, &RingElem),
    ) -> Result<()> {
        let alpha = add_exps(&m1.alpha, &m2.alpha);
        for (gamma, u) in &self.leibniz_move(&m1.beta, c2).terms {
            for (eps, w) in &self.d_past_s(gamma, &m2.alpha)?.terms {
                let coeff = c1 * &self.try_sigma_power_ring(&m1.alpha, &(u * w))?;
                out.add_term(PbwMonomial::new(alpha.clone(), add_exps(eps, &m2.beta)), coeff);
            }
        }
        Ok(())
    }

    pub(crate) fn try_mul(&self, a: &DdElement, b: &DdElement) -> Result<DdElement> {
        let mut out = DdElement::zero();
        for t1 in &a.terms {
            for t2 in &b.terms {
                self.mul_terms(&mut out, t1, t2)?;
            }
        }
        Ok(out)
    }

    /// Exact product in PBW normal form.
    pub fn mul_elem(&self, a: &DdElement, b: &DdElement) -> DdElement {
        self.try_mul(a, b).expect("multiplication on a validated presentation")
    }

    pub fn letter(&self, letter: &Letter) -> Result<DdElement> {
        match letter {
            Letter::Ring(r) => {
                self.p.ring.check(r)?;
                Ok(self.from_ring(r.clone()))
            }
            Letter::S(i) if *i < self.p.m => Ok(self.s(*i)),
            Letter::D(j) if *j < self.p.n => Ok(self.d(*j)),
            Letter::S(i) => Err(Error::BadInput(format!("no generator S{}", i + 1))),
            Letter::D(j) => Err(Error::BadInput(format!("no generator D{}", j + 1))),
        }
    }

    /// Normal form of a product of letters; the empty word is 1.
    pub fn normalize_word(&self, word: &[Letter]) -> Result<DdElement> {
        let mut acc = self.one();
        for l in word {
            let e = self.letter(l)?;
            acc = self.try_mul(&acc, &e)?;
        }
        Ok(acc)
    }

    /// Power `a^k` (with `a^0 = 1`).
    pub fn pow(&self, a: &DdElement, k: u32) -> DdElement {
        (0..k).fold(self.one(), |acc, _| self.mul_elem(&acc, a))
    }
}

/// Runs every relation check on a structurally well-formed presentation.
pub fn validate_presentation(p: &DdPresentation) -> Result<ValidationReport> {
    p.check_structure()?;
    Ok(validate::run(p))
}

pub(crate) fn unit_vec(len: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; len];
    v[i] = 1;
    v
}

pub(crate) fn add_exps(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// All exponent vectors componentwise `<= bound`, in mixed-radix order
/// (every vector comes after the ones obtained by lowering one entry).
pub(crate) fn boxes_below(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; bound.len()]];
    for (i, &b) in bound.iter().enumerate() {
        let prev = std::mem::take(&mut out);
        for v in prev {
            for k in 0..=b {
                let mut w = v.clone();
                w[i] = k;
                out.push(w);
            }
        }
    }
    out.sort_by_key(|v| v.iter().sum::<u32>());
    out
}
