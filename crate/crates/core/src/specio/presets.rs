//! Builtin presentations.

use crate::coeffring::{q, Q, RingElem, RingMap, RingSpec};
use crate::ddalgebra::{DdAlgebra, DdElement, DdPresentation};
use crate::error::{Error, Result};
use crate::growth::GeneratingSet;

use super::render_spec;

pub const PRESET_NAMES: &[&str] = &["commutative", "quantum-plane", "swap", "dszsd", "shift-weyl"];

#[derive(Debug)]
pub struct Preset {
    pub name: String,
    pub params: Vec<(String, Q)>,
    pub algebra: DdAlgebra,
    /// Basis of the default coefficient subspace V.
    pub v_basis: Vec<DdElement>,
}

impl Preset {
    fn build(name: &str, params: Vec<(String, Q)>, p: DdPresentation) -> Result<Self> {
        let algebra = DdAlgebra::new(p)?;
        let v_basis = default_v_basis(&algebra);
        Ok(Preset { name: name.into(), params, algebra, v_basis })
    }

    /// `W = V + X + Y`.
    pub fn default_gens(&self, r_max: usize) -> GeneratingSet {
        GeneratingSet::new(self.v_basis.clone(), true, true, r_max)
    }

    /// Basis of the default W.
    pub fn algebra_gens(&self) -> Vec<DdElement> {
        self.default_gens(0).w_basis(&self.algebra)
    }

    pub fn spec_text(&self) -> String {
        render_spec(self.algebra.presentation())
    }
}

/// `1`, every ring variable and the inverse of every invertible one.
pub fn default_v_basis(alg: &DdAlgebra) -> Vec<DdElement> {
    let ring = alg.ring();
    let mut v = vec![alg.one()];
    for t in 0..ring.arity() {
        v.push(alg.var(t));
        if ring.is_invertible(t) {
            let mut exps = vec![0; ring.arity()];
            exps[t] = -1;
            v.push(alg.from_ring(RingElem::monomial(exps, q(1))));
        }
    }
    v
}

fn constant_matrix(ring: &RingSpec, rows: &[Vec<Q>]) -> Vec<Vec<RingElem>> {
    rows.iter().map(|row| row.iter().map(|c| ring.constant(c.clone())).collect()).collect()
}

/// Type `(m, n)` over `R = k` with the given scalar matrices and zero derivations.
pub fn scalar_type(name: &str, m: usize, n: usize, matrices: &[Vec<Vec<Q>>]) -> Result<Preset> {
    if matrices.len() != m {
        return Err(Error::BadInput(format!("expected {m} matrices, found {}", matrices.len())));
    }
    let ring = RingSpec::field();
    let p = DdPresentation {
        m,
        n,
        sigma_ring: (0..m).map(|_| RingMap::endomorphism(vec![], Some(vec![]))).collect(),
        sigma_d: matrices.iter().map(|mat| constant_matrix(&ring, mat)).collect(),
        delta: (0..n).map(|_| RingMap::derivation(vec![])).collect(),
        ring,
    };
    Preset::build(name, vec![], p)
}

/// `k[x, y]` as type (1,1) over k.
pub fn commutative() -> Preset {
    scalar_type("commutative", 1, 1, &[vec![vec![q(1)]]]).expect("valid preset")
}

/// `k<x, y>/(yx - q xy)`; panics when `q = 0`.
pub fn quantum_plane(qv: Q) -> Preset {
    let mut p = scalar_type("quantum-plane", 1, 1, &[vec![vec![qv.clone()]]]).expect("q must be nonzero");
    p.params = vec![("q".into(), qv)];
    p
}

/// Type (1,2) over k with `D1 S1 = S1 D2` and `D2 S1 = S1 D1`.
pub fn swap() -> Preset {
    scalar_type("swap", 1, 2, &[vec![vec![q(0), q(1)], vec![q(1), q(0)]]]).expect("valid preset")
}

/// Type (1,1) over `k[z, z^-1]` with `sigma(z) = z`, `sigma(D) = zD`, `delta = 0`.
pub fn dszsd() -> Preset {
    let ring = RingSpec::new([("z", true)]).expect("valid ring");
    let z = ring.var(0);
    let p = DdPresentation {
        m: 1,
        n: 1,
        sigma_ring: vec![RingMap::endomorphism(vec![z.clone()], Some(vec![z.clone()]))],
        sigma_d: vec![vec![vec![z]]],
        delta: vec![RingMap::zero_derivation(&ring)],
        ring,
    };
    Preset::build("dszsd", vec![], p).expect("valid preset")
}

/// Type (1,1) over `k[z]` with `sigma(z) = z + 1`, `sigma(D) = D`, `delta = d/dz`.
pub fn shift_weyl() -> Preset {
    let ring = RingSpec::new([("z", false)]).expect("valid ring");
    let z = ring.var(0);
    let one = ring.one();
    let p = DdPresentation {
        m: 1,
        n: 1,
        sigma_ring: vec![RingMap::endomorphism(vec![&z + &one], Some(vec![&z - &one]))],
        sigma_d: vec![vec![vec![one.clone()]]],
        delta: vec![RingMap::derivation(vec![one])],
        ring,
    };
    Preset::build("shift-weyl", vec![], p).expect("valid preset")
}

/// Looks up a preset by name. `quantum-plane` takes `q` (default 2).
pub fn by_name(name: &str, params: &[(String, Q)]) -> Result<Preset> {
    let allowed: &[&str] = if name == "quantum-plane" { &["q"] } else { &[] };
    if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return Err(Error::BadInput(format!("preset `{name}` takes no parameter `{k}`")));
    }
    match name {
        "commutative" => Ok(commutative()),
        "quantum-plane" => {
            let qv = params.iter().rev().find(|(k, _)| k == "q").map(|(_, v)| v.clone()).unwrap_or_else(|| q(2));
            if qv == q(0) {
                return Err(Error::BadInput("q must be nonzero".into()));
            }
            Ok(quantum_plane(qv))
        }
        "swap" => Ok(swap()),
        "dszsd" => Ok(dszsd()),
        "shift-weyl" => Ok(shift_weyl()),
        _ => Err(Error::BadInput(format!("unknown preset `{name}`; known: {}", PRESET_NAMES.join(", ")))),
    }
}

/// Every named preset with default parameters.
pub fn all() -> Vec<Preset> {
    PRESET_NAMES.iter().map(|n| by_name(n, &[]).expect("builtin")).collect()
}
