//! Exact coefficient arithmetic.
//!
//! The base field is the rationals (arbitrary precision). Coefficient rings are
//! polynomial rings in finitely many variables, where each variable may have
//! its inverse adjoined (Laurent variables). A ring with no variables is the
//! base field itself.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

/// Exponent vector of a ring monomial.
pub type Exponents = Vec<i32>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Variables of a coefficient ring with their invertibility flags.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    vars: Vec<String>,
    invertible: Vec<bool>,
}

impl RingSpec {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, bool)>) -> Result<Self> {
        let mut names = Vec::new();
        let mut inv = Vec::new();
        for (name, flag) in vars {
            let name = name.into();
            if name.is_empty() {
                return Err(Error::Structure("empty variable name".into()));
            }
            if names.contains(&name) {
                return Err(Error::Structure(format!("duplicate variable `{name}`")));
            }
            names.push(name);
            inv.push(flag);
        }
        Ok(RingSpec { vars: names, invertible: inv })
    }

    /// The base field (no variables).
    pub fn field() -> Self {
        RingSpec { vars: Vec::new(), invertible: Vec::new() }
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_invertible(&self, i: usize) -> bool {
        self.invertible[i]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn zero(&self) -> RingElem {
        RingElem::zero(self.arity())
    }

    pub fn one(&self) -> RingElem {
        RingElem::one(self.arity())
    }

    pub fn constant(&self, c: Q) -> RingElem {
        RingElem::constant(self.arity(), c)
    }

    pub fn var(&self, i: usize) -> RingElem {
        RingElem::var(self.arity(), i)
    }

    /// `c * z^exps`, rejecting negative exponents at non-invertible variables.
    pub fn monomial(&self, exps: Exponents, c: Q) -> Result<RingElem> {
        let e = RingElem::monomial(exps, c);
        self.check(&e)?;
        Ok(e)
    }

    /// Checks arity and Laurent support of `a` against this ring.
    pub fn check(&self, a: &RingElem) -> Result<()> {
        if a.arity != self.arity() {
            return Err(Error::SpecMismatch { expected: self.arity(), found: a.arity });
        }
        for exps in a.terms.keys() {
            for (j, &e) in exps.iter().enumerate() {
                if e < 0 && !self.invertible[j] {
                    return Err(Error::NegativeExponent(self.vars[j].clone()));
                }
            }
        }
        Ok(())
    }

    /// Exact unit test: a single nonzero term whose variables are all invertible.
    pub fn is_unit(&self, a: &RingElem) -> bool {
        if a.terms.len() != 1 {
            return false;
        }
        let (exps, _) = a.terms.iter().next().unwrap();
        exps.iter().enumerate().all(|(j, &e)| e == 0 || self.invertible[j])
    }

    /// Inverse of a unit, `None` for non-units.
    pub fn unit_inverse(&self, a: &RingElem) -> Option<RingElem> {
        if !self.is_unit(a) {
            return None;
        }
        let (exps, c) = a.terms.iter().next().unwrap();
        Some(RingElem::monomial(exps.iter().map(|e| -e).collect(), c.recip()))
    }

    /// Applies an endomorphism given by variable images, extended multiplicatively.
    pub fn apply_endo(&self, e: &RingMap, a: &RingElem) -> Result<RingElem> {
        if e.kind != MapKind::Endomorphism {
            return Err(Error::WrongMapKind { expected: "endomorphism" });
        }
        self.substitute(&e.images, a)
    }

    /// Substitutes `images[j]` for the j-th variable of `a`.
    pub(crate) fn substitute(&self, images: &[RingElem], a: &RingElem) -> Result<RingElem> {
        if a.arity != self.arity() {
            return Err(Error::SpecMismatch { expected: self.arity(), found: a.arity });
        }
        let mut inverses: Vec<Option<RingElem>> = vec![None; self.arity()];
        let mut out = RingElem::zero(self.arity());
        for (exps, c) in &a.terms {
            let mut t = RingElem::constant(self.arity(), c.clone());
            for (j, &k) in exps.iter().enumerate() {
                if k > 0 {
                    t = &t * &images[j].pow(k as u32);
                } else if k < 0 {
                    if inverses[j].is_none() {
                        let inv = self
                            .unit_inverse(&images[j])
                            .ok_or_else(|| Error::NonInvertibleImage(self.vars[j].clone()))?;
                        inverses[j] = Some(inv);
                    }
                    t = &t * &inverses[j].as_ref().unwrap().pow((-k) as u32);
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Applies a derivation given by variable images (Leibniz rule on monomials).
    pub fn apply_derivation(&self, d: &RingMap, a: &RingElem) -> Result<RingElem> {
        if d.kind != MapKind::Derivation {
            return Err(Error::WrongMapKind { expected: "derivation" });
        }
        if a.arity != self.arity() {
            return Err(Error::SpecMismatch { expected: self.arity(), found: a.arity });
        }
        let mut out = RingElem::zero(self.arity());
        for (exps, c) in &a.terms {
            for (j, &k) in exps.iter().enumerate() {
                if k == 0 || d.images[j].is_zero() {
                    continue;
                }
                let mut lowered = exps.clone();
                lowered[j] -= 1;
                let factor = RingElem::monomial(lowered, c * q(k as i64));
                out = &out + &(&factor * &d.images[j]);
            }
        }
        Ok(out)
    }

    /// Certifies that `e` is invertible with the supplied inverse images.
    pub fn endo_is_automorphism(&self, e: &RingMap) -> Result<bool> {
        if e.kind != MapKind::Endomorphism {
            return Err(Error::WrongMapKind { expected: "endomorphism" });
        }
        let inverse = e.inverse_images.as_ref().ok_or(Error::CannotCertify)?;
        for ((&inv, img), pre) in self.invertible.iter().zip(&e.images).zip(inverse) {
            if inv && !(self.is_unit(img) && self.is_unit(pre)) {
                return Ok(false);
            }
        }
        for j in 0..self.arity() {
            let z = self.var(j);
            match (self.substitute(&e.images, &inverse[j]), self.substitute(inverse, &e.images[j])) {
                (Ok(a), Ok(b)) if a == z && b == z => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    /// Canonical text: lex-ascending terms, `p/q` coefficients, `z^-3` exponents.
    pub fn render(&self, a: &RingElem) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (exps, c)) in a.terms.iter().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let abs = c.abs();
            let mono = self.render_monomial(exps);
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => write!(s, "{abs}").unwrap(),
                (false, true) => s.push_str(&mono),
                (false, false) => write!(s, "{abs}*{mono}").unwrap(),
            }
        }
        s
    }

    fn render_monomial(&self, exps: &[i32]) -> String {
        let mut parts = Vec::new();
        for (j, &e) in exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.vars[j].clone()),
                _ => parts.push(format!("{}^{}", self.vars[j], e)),
            }
        }
        parts.join("*")
    }
}

/// Sparse Laurent polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    arity: usize,
    terms: BTreeMap<Exponents, Q>,
}

impl RingElem {
    pub fn zero(arity: usize) -> Self {
        RingElem { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Q::one())
    }

    pub fn constant(arity: usize, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; arity], c);
        }
        RingElem { arity, terms }
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut exps = vec![0; arity];
        exps[i] = 1;
        Self::monomial(exps, Q::one())
    }

    pub fn monomial(exps: Exponents, c: Q) -> Self {
        let arity = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        RingElem { arity, terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The scalar value if this element lies in the base field.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (exps, c) = self.terms.iter().next().unwrap();
                exps.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[i32]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    fn same_arity(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::SpecMismatch { expected: self.arity, found: other.arity });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut out = RingElem::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub(crate) fn add_term(&mut self, exps: Exponents, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return RingElem::zero(self.arity);
        }
        RingElem {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = RingElem::one(self.arity);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }
}

impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        self.try_add(rhs).expect("ring arity mismatch")
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        self.try_sub(rhs).expect("ring arity mismatch")
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        self.try_mul(rhs).expect("ring arity mismatch")
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapKind {
    Derivation,
    Endomorphism,
}

/// A derivation or endomorphism of a coefficient ring, given on variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingMap {
    pub kind: MapKind,
    pub images: Vec<RingElem>,
    pub inverse_images: Option<Vec<RingElem>>,
}

impl RingMap {
    pub fn derivation(images: Vec<RingElem>) -> Self {
        RingMap { kind: MapKind::Derivation, images, inverse_images: None }
    }

    pub fn endomorphism(images: Vec<RingElem>, inverse_images: Option<Vec<RingElem>>) -> Self {
        RingMap { kind: MapKind::Endomorphism, images, inverse_images }
    }

    pub fn identity(spec: &RingSpec) -> Self {
        let ids: Vec<_> = (0..spec.arity()).map(|j| spec.var(j)).collect();
        Self::endomorphism(ids.clone(), Some(ids))
    }

    pub fn zero_derivation(spec: &RingSpec) -> Self {
        Self::derivation(vec![spec.zero(); spec.arity()])
    }

    pub fn is_identity(&self) -> bool {
        self.kind == MapKind::Endomorphism
            && self.images.iter().enumerate().all(|(j, im)| *im == RingElem::var(im.arity(), j))
    }

    pub fn is_zero(&self) -> bool {
        self.kind == MapKind::Derivation && self.images.iter().all(RingElem::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laurent() -> RingSpec {
        RingSpec::new([("z", true)]).unwrap()
    }

    fn poly() -> RingSpec {
        RingSpec::new([("z", false)]).unwrap()
    }

    fn z_pow(k: i32) -> RingElem {
        RingElem::monomial(vec![k], q(1))
    }

    #[test]
    fn unit_pair_multiplies_to_one() {
        assert_eq!(&z_pow(1) * &z_pow(-1), RingElem::one(1));
    }

    #[test]
    fn difference_of_squares() {
        let one = RingElem::one(1);
        let a = &z_pow(1) + &one;
        let b = &z_pow(1) - &one;
        assert_eq!(&a * &b, &z_pow(2) - &one);
    }

    #[test]
    fn rational_cancellation() {
        let a = RingElem::monomial(vec![2], q_frac(3, 2));
        let b = RingElem::monomial(vec![-2], q_frac(2, 3));
        assert_eq!(&a * &b, RingElem::one(1));
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let a = RingElem::one(1);
        let b = RingElem::one(2);
        assert_eq!(a.try_mul(&b), Err(Error::SpecMismatch { expected: 1, found: 2 }));
    }

    #[test]
    fn derivation_examples() {
        let r = poly();
        let d = RingMap::derivation(vec![RingElem::one(1)]);
        assert_eq!(r.apply_derivation(&d, &z_pow(3)).unwrap(), RingElem::monomial(vec![2], q(3)));
        assert!(r.apply_derivation(&d, &RingElem::one(1)).unwrap().is_zero());
        let l = laurent();
        assert_eq!(l.apply_derivation(&d, &z_pow(-1)).unwrap(), RingElem::monomial(vec![-2], q(-1)));
    }

    #[test]
    fn endomorphism_examples() {
        let r = poly();
        let one = RingElem::one(1);
        let shift = RingMap::endomorphism(vec![&z_pow(1) + &one], None);
        let expected = &(&z_pow(2) + &RingElem::monomial(vec![1], q(2))) + &one;
        assert_eq!(r.apply_endo(&shift, &z_pow(2)).unwrap(), expected);

        let id = RingMap::identity(&r);
        let a = &z_pow(3) + &RingElem::constant(1, q_frac(-7, 3));
        assert_eq!(r.apply_endo(&id, &a).unwrap(), a);

        let l = laurent();
        let dbl = RingMap::endomorphism(vec![RingElem::monomial(vec![1], q(2))], None);
        assert_eq!(l.apply_endo(&dbl, &z_pow(-1)).unwrap(), RingElem::monomial(vec![-1], q_frac(1, 2)));

        let bad = RingMap::endomorphism(vec![&z_pow(1) + &one], None);
        assert_eq!(l.apply_endo(&bad, &z_pow(-1)), Err(Error::NonInvertibleImage("z".into())));
    }

    #[test]
    fn units() {
        assert!(laurent().is_unit(&RingElem::monomial(vec![-3], q(5))));
        assert!(!poly().is_unit(&z_pow(1)));
        assert!(!laurent().is_unit(&(&z_pow(1) + &RingElem::one(1))));
        assert!(!laurent().is_unit(&RingElem::zero(1)));
    }

    #[test]
    fn automorphism_certification() {
        let r = poly();
        let one = RingElem::one(1);
        let shift = RingMap::endomorphism(vec![&z_pow(1) + &one], Some(vec![&z_pow(1) - &one]));
        assert_eq!(r.endo_is_automorphism(&shift), Ok(true));
        let square = RingMap::endomorphism(vec![z_pow(2)], Some(vec![z_pow(1)]));
        assert_eq!(r.endo_is_automorphism(&square), Ok(false));
        assert_eq!(r.endo_is_automorphism(&RingMap::identity(&r)), Ok(true));
        let uncertified = RingMap::endomorphism(vec![z_pow(1)], None);
        assert_eq!(r.endo_is_automorphism(&uncertified), Err(Error::CannotCertify));
    }

    #[test]
    fn rendering() {
        let l = laurent();
        assert_eq!(l.render(&(&z_pow(2) - &RingElem::one(1))), "-1 + z^2");
        assert_eq!(l.render(&RingElem::monomial(vec![-3], q_frac(3, 2))), "3/2*z^-3");
        assert_eq!(l.render(&RingElem::zero(1)), "0");
        assert_eq!(l.render(&RingElem::monomial(vec![1], q(-1))), "-z");
    }

    #[test]
    fn negative_exponent_rejected_on_polynomial_variable() {
        assert_eq!(poly().monomial(vec![-1], q(1)), Err(Error::NegativeExponent("z".into())));
    }
}
