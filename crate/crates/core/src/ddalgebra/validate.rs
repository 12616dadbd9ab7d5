use serde::Serialize;

use super::{DdAlgebra, DdPresentation, Letter};
use crate::coeffring::{RingElem, RingSpec};
use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn failure_summary(&self) -> String {
        self.failures()
            .map(|c| if c.detail.is_empty() { c.name.clone() } else { format!("{}: {}", c.name, c.detail) })
            .collect::<Vec<_>>()
            .join("; ")
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let status = if c.passed { "ok" } else { "FAIL" };
            s.push_str(&format!("{status:4} {}", c.name));
            if !c.detail.is_empty() {
                s.push_str(&format!(" ({})", c.detail));
            }
            s.push('\n');
        }
        s.push_str(if self.is_valid() { "valid\n" } else { "invalid\n" });
        s
    }

    fn push(&mut self, name: String, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult { name, passed, detail: detail.into() });
    }
}

pub(super) fn run(p: &DdPresentation) -> ValidationReport {
    let ring = &p.ring;
    let mut report = ValidationReport::default();

    let mut automorphisms_ok = true;
    for (i, s) in p.sigma_ring.iter().enumerate() {
        let (passed, detail) = match ring.endo_is_automorphism(s) {
            Ok(true) => (true, ""),
            Ok(false) => (false, "inverse images do not invert the map"),
            Err(Error::CannotCertify) => (false, "inverse images missing"),
            Err(_) => (false, "not an endomorphism"),
        };
        automorphisms_ok &= passed;
        report.push(format!("sigma{}-automorphism", i + 1), passed, detail);
    }

    for (i, mat) in p.sigma_d.iter().enumerate() {
        let det = determinant(mat, ring.arity());
        let unit = ring.is_unit(&det);
        let detail = if unit { String::new() } else { format!("det = {} is not a unit", ring.render(&det)) };
        report.push(format!("sigma{}-det-unit", i + 1), unit, detail);
    }

    for a in 0..p.n {
        for b in a + 1..p.n {
            let mut ok = true;
            for t in 0..ring.arity() {
                let z = ring.var(t);
                let ab = ring
                    .apply_derivation(&p.delta[a], &ring.apply_derivation(&p.delta[b], &z).unwrap())
                    .unwrap();
                let ba = ring
                    .apply_derivation(&p.delta[b], &ring.apply_derivation(&p.delta[a], &z).unwrap())
                    .unwrap();
                ok &= ab == ba;
            }
            report.push(format!("delta{}-delta{}-commute", a + 1, b + 1), ok, "");
        }
    }

    if automorphisms_ok {
        for a in 0..p.m {
            for b in a + 1..p.m {
                let (ok, detail) = sigmas_commute(p, a, b);
                report.push(format!("sigma{}-sigma{}-commute", a + 1, b + 1), ok, detail);
            }
        }
        let (ok, detail) = associativity_spot_check(p);
        report.push("associativity".into(), ok, detail);
    }
    report
}

fn sigmas_commute(p: &DdPresentation, a: usize, b: usize) -> (bool, String) {
    let ring = &p.ring;
    let (sa, sb) = (&p.sigma_ring[a], &p.sigma_ring[b]);
    for t in 0..ring.arity() {
        let z = ring.var(t);
        let ab = ring.apply_endo(sa, &ring.apply_endo(sb, &z).unwrap());
        let ba = ring.apply_endo(sb, &ring.apply_endo(sa, &z).unwrap());
        if ab != ba {
            return (false, format!("disagree on {}", ring.vars()[t]));
        }
    }
    // sigma_a(A_b) * A_a must equal sigma_b(A_a) * A_b.
    let apply = |s, mat: &Vec<Vec<RingElem>>| -> Vec<Vec<RingElem>> {
        mat.iter().map(|row| row.iter().map(|e| ring.apply_endo(s, e).unwrap()).collect()).collect()
    };
    let lhs = mat_mul(&apply(sa, &p.sigma_d[b]), &p.sigma_d[a], ring);
    let rhs = mat_mul(&apply(sb, &p.sigma_d[a]), &p.sigma_d[b], ring);
    if lhs != rhs {
        return (false, "disagree on the D matrices".into());
    }
    (true, String::new())
}

fn mat_mul(a: &[Vec<RingElem>], b: &[Vec<RingElem>], ring: &RingSpec) -> Vec<Vec<RingElem>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(ring.zero(), |acc, l| &acc + &(&a[i][l] * &b[l][j])))
                .collect()
        })
        .collect()
}

/// Determinant by cofactor expansion along the first row.
pub(crate) fn determinant(mat: &[Vec<RingElem>], arity: usize) -> RingElem {
    let n = mat.len();
    if n == 0 {
        return RingElem::one(arity);
    }
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut det = RingElem::zero(arity);
    for col in 0..n {
        if mat[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<RingElem>> = mat[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, e)| e.clone()).collect())
            .collect();
        let term = &mat[0][col] * &determinant(&minor, arity);
        det = if col % 2 == 0 { &det + &term } else { &det - &term };
    }
    det
}

/// `(ab)c == a(bc)` for every ordered triple of generator letters.
fn associativity_spot_check(p: &DdPresentation) -> (bool, String) {
    let alg = DdAlgebra::unchecked(p.clone());
    let ring = &p.ring;
    let mut letters: Vec<(String, Letter)> = Vec::new();
    for i in 0..p.m {
        letters.push((format!("S{}", i + 1), Letter::S(i)));
    }
    for j in 0..p.n {
        letters.push((format!("D{}", j + 1), Letter::D(j)));
    }
    for t in 0..ring.arity() {
        letters.push((ring.vars()[t].clone(), Letter::Ring(ring.var(t))));
        if ring.is_invertible(t) {
            let inv = ring.unit_inverse(&ring.var(t)).unwrap();
            letters.push((format!("{}^-1", ring.vars()[t]), Letter::Ring(inv)));
        }
    }
    let elems: Vec<_> = letters.iter().map(|(_, l)| alg.letter(l).unwrap()).collect();
    for (ia, a) in elems.iter().enumerate() {
        for (ib, b) in elems.iter().enumerate() {
            for (ic, c) in elems.iter().enumerate() {
                let left = alg.try_mul(a, b).and_then(|ab| alg.try_mul(&ab, c));
                let right = alg.try_mul(b, c).and_then(|bc| alg.try_mul(a, &bc));
                let ok = matches!((&left, &right), (Ok(l), Ok(r)) if l == r);
                if !ok {
                    return (false, format!("({} {}) {}", letters[ia].0, letters[ib].0, letters[ic].0));
                }
            }
        }
    }
    (true, String::new())
}
