//! Operator (Hermitian-matrix-valued) polynomials, atomic operator- and
//! map-valued measures, truncated operator moment tests and positivity
//! preservers.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod linop;
pub mod matpoly;
pub mod measures;
pub mod moments;
pub mod preserver;
pub mod random;

pub use error::{Error, Result};
