//! Gaussian space in one dimension (and separable products): Gauss–Hermite
//! quadrature, the Ornstein–Uhlenbeck semigroup, the Gaussian log-Sobolev
//! inequality, the Herbst bound and Gaussian concentration.

mod checks;
mod functions;
mod quadrature;

pub use checks::{
    fisher_lsi_check, gaussian_concentration_check, gaussian_lsi_check, gaussian_samples,
    herbst_mgf_check, ou_apply, ou_eval, product_lsi_check, HERBST_TOL, LSI_TOL,
    MAX_PRODUCT_DIMENSION, MIN_LSI_ORDER, MIN_SAMPLES,
};
pub use functions::SmoothTestFunction;
pub use quadrature::{QuadratureRule, DEFAULT_ORDER, MAX_ORDER};
