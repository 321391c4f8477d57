//! Scalars, multi-indices, Hermitian matrices and PSD testing.

pub mod eigen;
pub mod matrix;
pub mod multi_index;
pub mod psd;
pub mod scalar;

pub use eigen::{eig_min, eig_min_checked, jacobi_eigen, SymEigen};
pub use matrix::{HermMatrix, Mat};
pub use multi_index::MultiIndex;
pub use psd::{psd_check_approx, psd_check_exact, scaled_tolerance, PsdVerdict, DEFAULT_PSD_TOL};
pub use scalar::{convert, format_rational, parse_rational, Cplx, Real};

/// Exact rational scalar.
pub type Q = num_rational::BigRational;
