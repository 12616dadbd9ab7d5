//! Exact arithmetic and growth computations for differential difference
//! algebras `R[S_1..S_m, D_1..D_n; sigma, delta]` over a field of rationals.
//!
//! Elements are kept in PBW normal form `sum r * S^alpha D^beta` with
//! coefficients on the left. Subspaces are exact rational spans, so growth
//! tables `dim(W^r)` carry no rounding.

pub mod coeffring;
pub mod ddalgebra;
pub mod error;
pub mod gkestimate;
pub mod growth;
pub mod linbasis;
pub mod specio;

pub use coeffring::{q, q_frac, MapKind, RingElem, RingMap, RingSpec, Q};
pub use ddalgebra::{validate_presentation, DdAlgebra, DdElement, DdPresentation, Letter, PbwMonomial};
pub use error::{Error, Result};
pub use specio::{parse_expr, parse_spec, render_spec, ParseError, ParseErrorKind};
