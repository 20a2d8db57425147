//! Finite probability spaces, their products, and the entropy and variance
//! functionals with their sub-additivity bounds.

mod functional;
mod space;
mod tensorize;

pub use functional::{
    duality_gap_profile, duality_grid, entropic_bound, entropy, entropy_duality_gap, entropy_of,
    log_mean_exp, mean_of, variance, variance_of, variational_entropy, xlogx, FieldFunction,
    CHECK_TOL, DENSITY_TOL,
};
pub(crate) use functional::entropy_or_zero;
pub use space::{FiniteSpace, Measure, ProductSpace, MAX_PRODUCT_POINTS, NORMALIZATION_SLACK};
pub use tensorize::{
    conditional_slices, tensorization_bound, tensorization_rhs, ConditionalSlice,
    TensorizationVariant,
};
