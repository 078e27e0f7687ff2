//! Exact sparse polynomials in z, z̄ over the Gaussian rationals.

mod bihom;
mod monomial;
mod series;

pub use bihom::{hermitian_quadric, BihomPoly, PurePoly};
pub use monomial::{monomial_basis, Monomial};
pub use series::{poly_arith, ArithOp, ExtNat, MixedSeries, Operand};
