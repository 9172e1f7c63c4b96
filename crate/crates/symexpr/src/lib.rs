//! Exact symbolic algebra for curvature computations.
//!
//! Values are rational functions over [`Atom`]s with rational coefficients,
//! kept in a canonical form so that `a == b` decides equality of values.

mod atom;
mod error;
mod expr;
mod gcd;
mod poly;
mod raw;

pub use atom::{Atom, AtomDerivative, AtomKind, Symbol, TrigFn};
pub use error::ExprError;
pub use expr::Expression;
pub use gcd::gcd;
pub use poly::{Monomial, Poly, Rational};
pub use raw::RawExpr;
