//! Discrete quadratic optimal transport: the transportation simplex, the
//! T₂ inequality against relative entropy for the Gaussian measure, and the
//! Hopf–Lax infimum convolution behind Kantorovich duality.

mod hopf_lax;
mod io;
mod simplex;
mod t2;

use std::collections::HashMap;

use crate::error::{Error, Result};

pub use hopf_lax::{
    hamilton_jacobi_residual, hopf_lax, hopf_lax_at, kantorovich_dual_value,
    kantorovich_duality_gap, DualityGap, GridFunction,
};
pub use io::{parse_measure, write_measure, write_plan};
pub use simplex::{
    transport, w2, DualPotentials, TransportPlan, TransportSolution, DUAL_FEASIBILITY_TOL,
    GAP_TOL, MARGINAL_TOL, MAX_SUPPORT,
};
pub use t2::{quantile_cells, shift_density, t2_check, t2_reweighted, QuantileCells, T2_TOL};

/// Slack allowed on the total mass of a measure.
pub const MASS_TOL: f64 = 1e-12;

/// A probability measure with finite support in ℝᵈ.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    support: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

fn point_key(p: &[f64]) -> Vec<u64> {
    // +0.0 and -0.0 are the same point.
    p.iter().map(|&x| (x + 0.0).to_bits()).collect()
}

impl DiscreteMeasure {
    pub fn new(support: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::domain("empty support"));
        }
        if support.len() != weights.len() {
            return Err(Error::Mismatch(format!(
                "{} support points but {} weights",
                support.len(),
                weights.len()
            )));
        }
        let d = support[0].len();
        if d == 0 {
            return Err(Error::domain("support points must have dimension >= 1"));
        }
        let mut seen = HashMap::with_capacity(support.len());
        for (k, p) in support.iter().enumerate() {
            if p.len() != d {
                return Err(Error::Mismatch(format!("point {k} has dimension {}, expected {d}", p.len())));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::domain(format!("point {k} is not finite")));
            }
            if let Some(prev) = seen.insert(point_key(p), k) {
                return Err(Error::domain(format!("points {prev} and {k} coincide")));
            }
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::domain("weights must be finite and nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::domain(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { support, weights })
    }

    /// Builds a measure from unnormalised nonnegative masses.
    pub fn normalized(support: Vec<Vec<f64>>, masses: Vec<f64>) -> Result<Self> {
        let total: f64 = masses.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::domain("masses must have a positive finite total"));
        }
        Self::new(support, masses.into_iter().map(|m| m / total).collect())
    }

    pub fn dirac(point: Vec<f64>) -> Result<Self> {
        Self::new(vec![point], vec![1.0])
    }

    /// Uniform weights on a list of real numbers.
    pub fn uniform_on_line(points: &[f64]) -> Result<Self> {
        let m = points.len();
        Self::normalized(points.iter().map(|&x| vec![x]).collect(), vec![1.0; m])
    }

    pub fn support(&self) -> &[Vec<f64>] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.support[0].len()
    }

    pub fn mean(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.dimension()];
        for (p, w) in self.support.iter().zip(&self.weights) {
            for (mi, x) in m.iter_mut().zip(p) {
                *mi += w * x;
            }
        }
        m
    }

    /// Translates every support point by `b`.
    pub fn shifted(&self, b: &[f64]) -> Result<Self> {
        if b.len() != self.dimension() {
            return Err(Error::Mismatch("shift has the wrong dimension".into()));
        }
        let support = self
            .support
            .iter()
            .map(|p| p.iter().zip(b).map(|(x, s)| x + s).collect())
            .collect();
        Self::new(support, self.weights.clone())
    }
}

pub fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// H(μ | ν) = Σ μᵢ log(μᵢ/νᵢ), or +∞ with the flag cleared when μ charges a
/// point ν does not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeEntropy {
    pub value: f64,
    pub absolutely_continuous: bool,
}

pub fn relative_entropy(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<RelativeEntropy> {
    if mu.dimension() != nu.dimension() {
        return Err(Error::Mismatch("measures live in different dimensions".into()));
    }
    let index: HashMap<Vec<u64>, usize> = nu
        .support
        .iter()
        .enumerate()
        .map(|(k, p)| (point_key(p), k))
        .collect();
    let mut value = 0.0;
    for (p, &m) in mu.support.iter().zip(&mu.weights) {
        if m == 0.0 {
            continue;
        }
        let n = index.get(&point_key(p)).map_or(0.0, |&k| nu.weights[k]);
        if n <= 0.0 {
            return Ok(RelativeEntropy {
                value: f64::INFINITY,
                absolutely_continuous: false,
            });
        }
        value += m * (m / n).ln();
    }
    Ok(RelativeEntropy {
        value: value.max(0.0),
        absolutely_continuous: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(DiscreteMeasure::new(vec![], vec![]).is_err());
        assert!(DiscreteMeasure::new(vec![vec![0.0], vec![0.0]], vec![0.5, 0.5]).is_err());
        assert!(DiscreteMeasure::new(vec![vec![0.0], vec![-0.0]], vec![0.5, 0.5]).is_err());
        assert!(DiscreteMeasure::new(vec![vec![0.0], vec![1.0, 2.0]], vec![0.5, 0.5]).is_err());
        assert!(DiscreteMeasure::new(vec![vec![0.0]], vec![0.9]).is_err());
        assert!(DiscreteMeasure::new(vec![vec![0.0], vec![1.0]], vec![1.5, -0.5]).is_err());
        assert!(DiscreteMeasure::new(vec![vec![f64::NAN]], vec![1.0]).is_err());
    }

    #[test]
    fn relative_entropy_of_dirac_against_uniform_is_log_m() {
        let pts: Vec<f64> = (0..7).map(f64::from).collect();
        let nu = DiscreteMeasure::uniform_on_line(&pts).unwrap();
        let mu = DiscreteMeasure::dirac(vec![3.0]).unwrap();
        let h = relative_entropy(&mu, &nu).unwrap();
        assert!(h.absolutely_continuous);
        assert!((h.value - 7f64.ln()).abs() < 1e-14);
        assert_eq!(relative_entropy(&nu, &nu).unwrap().value, 0.0);
    }

    #[test]
    fn missing_support_gives_infinite_entropy() {
        let nu = DiscreteMeasure::uniform_on_line(&[0.0, 1.0]).unwrap();
        let mu = DiscreteMeasure::dirac(vec![0.5]).unwrap();
        let h = relative_entropy(&mu, &nu).unwrap();
        assert!(!h.absolutely_continuous);
        assert_eq!(h.value, f64::INFINITY);
        let nu0 = DiscreteMeasure::new(vec![vec![0.0], vec![1.0]], vec![1.0, 0.0]).unwrap();
        let mu1 = DiscreteMeasure::dirac(vec![1.0]).unwrap();
        assert!(!relative_entropy(&mu1, &nu0).unwrap().absolutely_continuous);
    }
}
