use sha2::{Digest, Sha256};

use crate::coeffring::{MapKind, RingElem, RingMap, RingSpec};
use crate::error::{Error, Result};

/// Defining data of a differential difference algebra of type (m, n).
///
/// `sigma_d[i][j][l]` is the coefficient of `D_l` in `sigma_i(D_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DdPresentation {
    pub m: usize,
    pub n: usize,
    pub ring: RingSpec,
    pub sigma_ring: Vec<RingMap>,
    pub sigma_d: Vec<Vec<Vec<RingElem>>>,
    pub delta: Vec<RingMap>,
}

impl DdPresentation {
    /// Checks shapes, arities and map kinds. Does not check the algebra relations.
    pub fn check_structure(&self) -> Result<()> {
        let k = self.ring.arity();
        let fail = |msg: String| Err(Error::Structure(msg));
        if self.sigma_ring.len() != self.m || self.sigma_d.len() != self.m {
            return fail(format!("expected {} sigma maps", self.m));
        }
        if self.delta.len() != self.n {
            return fail(format!("expected {} delta maps", self.n));
        }
        for (i, s) in self.sigma_ring.iter().enumerate() {
            if s.kind != MapKind::Endomorphism {
                return fail(format!("sigma {} is not an endomorphism", i + 1));
            }
            if s.images.len() != k {
                return fail(format!("sigma {} has {} images, ring has {k} variables", i + 1, s.images.len()));
            }
            if let Some(inv) = &s.inverse_images {
                if inv.len() != k {
                    return fail(format!("sigma {} inverse has wrong arity", i + 1));
                }
                for e in inv {
                    self.ring.check(e)?;
                }
            }
            for e in &s.images {
                self.ring.check(e)?;
            }
        }
        for (i, mat) in self.sigma_d.iter().enumerate() {
            if mat.len() != self.n || mat.iter().any(|row| row.len() != self.n) {
                return fail(format!("sigma {} matrix must be {}x{}", i + 1, self.n, self.n));
            }
            for e in mat.iter().flatten() {
                self.ring.check(e)?;
            }
        }
        for (j, d) in self.delta.iter().enumerate() {
            if d.kind != MapKind::Derivation {
                return fail(format!("delta {} is not a derivation", j + 1));
            }
            if d.images.len() != k {
                return fail(format!("delta {} has wrong arity", j + 1));
            }
            for e in &d.images {
                self.ring.check(e)?;
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical spec text, hex encoded.
    pub fn fingerprint(&self) -> String {
        let text = crate::specio::render_spec(self);
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    /// True when every sigma_i(D_j) is a k-linear combination of the D's.
    pub fn sigma_d_is_scalar(&self) -> bool {
        self.sigma_d.iter().flatten().flatten().all(|e| e.as_constant().is_some())
    }
}
