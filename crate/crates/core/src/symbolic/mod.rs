//! Differential polynomials over jet coordinates.
//!
//! An [`Expr`] is a canonical sum of monomials with exact rational
//! coefficients. Atoms are jet coordinates ([`Coord`]) or formal partial
//! derivatives of opaque function symbols ([`FuncAtom`]). Equality of
//! expressions is structural equality of canonical forms, which makes the
//! zero test exact.

mod context;
mod coord;
mod display;
mod expr;
mod multi_index;
mod raw;

pub use context::JetContext;
pub use coord::Coord;
pub use expr::{Atom, Expr, FuncAtom, FunctionSymbol, Monomial};
pub use multi_index::MultiIndex;
pub use raw::RawExpr;

/// Exact coefficient field.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Shorthand for `num / den`.
pub fn qr(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
