//! Numerical laboratory for concentration of measure on finite product
//! spaces, the biased cube, Gaussian space and discrete transport.

// NaN-rejecting guards are written as negated comparisons throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convex;
pub mod cube;
pub mod empirical;
pub mod error;
pub mod gauss;
pub mod influence;
pub mod linalg;
pub mod measure;
pub mod report;
pub mod rng;
pub mod suites;
pub mod transport;

pub use error::{Error, Result};
pub use report::VerificationReport;
