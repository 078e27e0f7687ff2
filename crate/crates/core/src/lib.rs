//! Formal normal forms of real codimension-two submanifolds of C^{N+1} near a CR singular point.
//!
//! The defining equation is `w = ⟨z,z⟩ + Σ φ_{m,n}(z,z̄)`. [`moser::extended_moser`] computes the
//! trace-normalized partial normal form and [`normalform::full_normalize`] removes the remaining
//! kernel freedom through Fischer conditions on the pure terms. All arithmetic is exact.

pub mod cli;
pub mod coeff;
pub mod decomp;
mod dense;
pub mod error;
pub mod io;
pub mod linalg;
pub mod moser;
pub mod normalform;
pub mod polycore;
pub mod random;

pub use coeff::{GaussCoeff, Rational};
pub use error::{CrnfError, Result};
