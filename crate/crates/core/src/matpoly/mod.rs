//! Matrix-valued polynomials, regions and sampled positivity.

pub mod poly;
pub mod region;
pub mod sample;

pub use poly::{monomial_value, MatrixPolynomial, ScalarPoly};
pub use region::{RegionK, RegionKind};
pub use sample::{pos_sample, GridSpec, PositivityReport};
