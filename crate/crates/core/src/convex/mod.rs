//! Talagrand's convex distance on finite product spaces: hulls of
//! disagreement patterns, their minimum-norm points, the dual weighted
//! Hamming functional and the concentration bounds built on them.

mod checks;
mod corollary;
mod io;
mod minnorm;

pub use checks::{
    convex_distance_moment, distance_profile, dual_distance, intermediate_bounds,
    orthant_grid, grid_lower_bound, square_lipschitz_check, weighted_hamming, DistanceProfile,
    DualDistance, MomentConstant,
};
pub use corollary::{
    corollary_concentration, median, BernoulliNorm, CorollaryMode, CORNER_TOL,
};
pub use io::{parse_pattern_set, write_pattern_set};
pub use minnorm::{wolfe_min_norm, MinNormResult, CERT_TOL};

use crate::error::{Error, Result};
use crate::measure::{Measure, ProductSpace};

/// Most coordinates a hull vertex may have (patterns are stored as bit masks).
pub const MAX_HULL_DIMENSION: usize = 64;

/// A non-empty set `A` of points of a product space.
#[derive(Debug, Clone)]
pub struct PatternSet {
    base: ProductSpace,
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl PatternSet {
    pub fn new(base: ProductSpace, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        if base.dimension() > MAX_HULL_DIMENSION {
            return Err(Error::Size {
                what: "pattern dimension",
                requested: base.dimension() as u128,
                limit: MAX_HULL_DIMENSION as u128,
            });
        }
        let mut mask = vec![false; base.len()];
        for m in members {
            if m >= base.len() {
                return Err(Error::IndexOutOfRange {
                    index: m,
                    len: base.len(),
                });
            }
            mask[m] = true;
        }
        let members: Vec<usize> = (0..base.len()).filter(|&k| mask[k]).collect();
        if members.is_empty() {
            return Err(Error::invalid("pattern set A must be non-empty"));
        }
        Ok(Self {
            base,
            members,
            mask,
        })
    }

    pub fn base(&self) -> &ProductSpace {
        &self.base
    }

    /// Member indices in increasing order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, index: usize) -> bool {
        self.mask.get(index).copied().unwrap_or(false)
    }

    /// `P(A)`.
    pub fn probability(&self) -> f64 {
        let w = self.base.weights();
        self.members.iter().map(|&k| w[k]).sum()
    }

    /// Disagreement mask of `x` and `y`: bit `i` is set when `x_i ≠ y_i`.
    pub(crate) fn disagreement(&self, x: usize, y: usize) -> u64 {
        let mut bits = 0u64;
        for i in 0..self.base.dimension() {
            if self.base.coord(x, i) != self.base.coord(y, i) {
                bits |= 1 << i;
            }
        }
        bits
    }
}

/// The distinct disagreement patterns `1_{x_i ≠ y_i}`, `y ∈ A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullInstance {
    dim: usize,
    masks: Vec<u64>,
}

impl HullInstance {
    pub fn from_masks(dim: usize, mut masks: Vec<u64>) -> Result<Self> {
        if dim > MAX_HULL_DIMENSION {
            return Err(Error::invalid(format!("hull dimension {dim} too large")));
        }
        if masks.is_empty() {
            return Err(Error::invalid("hull needs at least one vertex"));
        }
        if dim < 64 && masks.iter().any(|&m| m >> dim != 0) {
            return Err(Error::invalid("vertex mask outside the hull dimension"));
        }
        masks.sort_unstable();
        masks.dedup();
        Ok(Self { dim, masks })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn contains_origin(&self) -> bool {
        self.masks[0] == 0
    }

    pub fn vertex(&self, k: usize) -> Vec<f64> {
        (0..self.dim)
            .map(|i| ((self.masks[k] >> i) & 1) as f64)
            .collect()
    }

    pub fn vertices(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|k| self.vertex(k)).collect()
    }
}

pub fn build_hull(a: &PatternSet, x: usize) -> Result<HullInstance> {
    if x >= a.base.len() {
        return Err(Error::IndexOutOfRange {
            index: x,
            len: a.base.len(),
        });
    }
    let masks = a.members.iter().map(|&y| a.disagreement(x, y)).collect();
    HullInstance::from_masks(a.base.dimension(), masks)
}

pub fn min_norm_point(h: &HullInstance) -> MinNormResult {
    if h.contains_origin() {
        let mut coefficients = vec![0.0; h.len()];
        coefficients[0] = 1.0;
        return MinNormResult {
            point: vec![0.0; h.dim()],
            distance: 0.0,
            coefficients,
            certificate: 0.0,
            iterations: 0,
        };
    }
    wolfe_min_norm(&h.vertices())
}
