//! Exact variational calculus on jet prolongations of fibered manifolds.
//!
//! The crate is organised bottom-up:
//!
//! * [`symbolic`]: differential polynomials over jet coordinates with exact
//!   rational coefficients and opaque function symbols.
//! * [`exterior`]: differential forms with [`Expr`] coefficients.
//! * [`jet`]: projectable vector fields, their prolongations and tensor lifts.
//! * [`variational`]: horizontalization, Lepage equivalents, the Euler
//!   operator, null Lagrangians and the first variation.
//! * [`symmetry`]: Noether analysis and general covariance.
//! * [`numeric`]: independent numeric oracles.
//!
//! Everything is immutable and pure; values can be shared freely across
//! threads.

pub mod error;
pub mod exterior;
pub mod jet;
pub mod numeric;
pub mod random;
pub mod symbolic;
pub mod symmetry;
pub mod variational;

pub use error::{Error, Result};
pub use exterior::{Basis, DiffForm, JetField, PolySection};
pub use jet::{ProjectableField, SigmaConstants, TensorType, Variance};
pub use symbolic::{Atom, Coord, Expr, FuncAtom, FunctionSymbol, JetContext, Monomial, MultiIndex, Rational, RawExpr};
pub use variational::{EulerSystem, Lagrangian, VariationSplit};
