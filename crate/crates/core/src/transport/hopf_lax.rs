//! The Hopf–Lax infimum convolution Q_sφ(x) = min_y [φ(y) + |x − y|²/2s]
//! on finite grids, and the dual side of (1/2)W₂² = sup ∫Q₁φ dμ − ∫φ dν.

use super::{squared_distance, w2, DiscreteMeasure};
use crate::error::{Error, Result};

/// Values of a function on a finite set of points.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(points: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("empty grid"));
        }
        if points.len() != values.len() {
            return Err(Error::Mismatch(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        let d = points[0].len();
        if points.iter().any(|p| p.len() != d) {
            return Err(Error::Mismatch("grid points of mixed dimension".into()));
        }
        Ok(Self { points, values })
    }

    pub fn on_line(xs: &[f64], f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(xs.iter().map(|&x| vec![x]).collect(), xs.iter().map(|&x| f(x)).collect())
    }
}

fn check_time(s: f64) -> Result<()> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(format!("Hopf-Lax time must be positive, got {s}")));
    }
    Ok(())
}

fn infimum(phi: &GridFunction, x: &[f64], s: f64) -> f64 {
    phi.points
        .iter()
        .zip(&phi.values)
        .map(|(y, v)| v + squared_distance(x, y) / (2.0 * s))
        .fold(f64::INFINITY, f64::min)
}

/// Q_sφ evaluated at arbitrary targets, minimising over the grid of `phi`.
pub fn hopf_lax_at(phi: &GridFunction, targets: &[Vec<f64>], s: f64) -> Result<Vec<f64>> {
    check_time(s)?;
    let d = phi.points[0].len();
    if targets.iter().any(|t| t.len() != d) {
        return Err(Error::Mismatch("target dimension differs from grid".into()));
    }
    Ok(targets.iter().map(|x| infimum(phi, x, s)).collect())
}

/// Q_sφ on the grid of `phi` itself.
pub fn hopf_lax(phi: &GridFunction, s: f64) -> Result<GridFunction> {
    let values = hopf_lax_at(phi, &phi.points, s)?;
    Ok(GridFunction {
        points: phi.points.clone(),
        values,
    })
}

/// max |∂_s Q + ½|∂_x Q|²| over the middle half of an evenly spaced 1-D grid,
/// by centred differences in both variables.
pub fn hamilton_jacobi_residual(phi: &GridFunction, s: f64, ds: f64) -> Result<f64> {
    check_time(s - ds)?;
    if phi.points[0].len() != 1 || phi.points.len() < 8 {
        return Err(Error::invalid("residual needs a 1-D grid of at least 8 points"));
    }
    let xs: Vec<f64> = phi.points.iter().map(|p| p[0]).collect();
    let h = xs[1] - xs[0];
    if xs.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1.0)) {
        return Err(Error::invalid("grid must be evenly spaced"));
    }
    let now = hopf_lax_at(phi, &phi.points, s)?;
    let later = hopf_lax_at(phi, &phi.points, s + ds)?;
    let earlier = hopf_lax_at(phi, &phi.points, s - ds)?;
    let n = xs.len();
    let mut worst: f64 = 0.0;
    for k in n / 4..3 * n / 4 {
        let dt = (later[k] - earlier[k]) / (2.0 * ds);
        let dx = (now[k + 1] - now[k - 1]) / (2.0 * h);
        worst = worst.max((dt + 0.5 * dx * dx).abs());
    }
    Ok(worst)
}

/// ∫Q₁φ dμ − ∫φ dν for φ given on the support of ν.
pub fn kantorovich_dual_value(mu: &DiscreteMeasure, nu: &DiscreteMeasure, phi: &[f64]) -> Result<f64> {
    if mu.dimension() != nu.dimension() {
        return Err(Error::Mismatch("measures live in different dimensions".into()));
    }
    let grid = GridFunction::new(nu.support().to_vec(), phi.to_vec())?;
    let q = hopf_lax_at(&grid, mu.support(), 1.0)?;
    let plus: f64 = q.iter().zip(mu.weights()).map(|(q, w)| q * w).sum();
    let minus: f64 = phi.iter().zip(nu.weights()).map(|(p, w)| p * w).sum();
    Ok(plus - minus)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualityGap {
    /// Best dual value over the candidates.
    pub best: f64,
    /// (1/2)W₂² from the primal solve.
    pub half_cost: f64,
    /// Dual value of φ = −phi/2 built from the solver's potentials.
    pub from_potentials: f64,
    /// `best / half_cost`, or 1 when the cost vanishes.
    pub ratio: f64,
}

/// Compares the dual sup against the primal optimum. The candidate built from
/// the solver potentials is always included; `candidates` adds more.
pub fn kantorovich_duality_gap(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    candidates: &[Vec<f64>],
) -> Result<DualityGap> {
    let sol = w2(mu, nu)?;
    let seed: Vec<f64> = sol.potentials.phi.iter().map(|p| -0.5 * p).collect();
    let from_potentials = kantorovich_dual_value(mu, nu, &seed)?;
    let mut best = from_potentials;
    for c in candidates {
        best = best.max(kantorovich_dual_value(mu, nu, c)?);
    }
    let half_cost = 0.5 * sol.cost;
    let ratio = if half_cost > 0.0 { best / half_cost } else { 1.0 };
    Ok(DualityGap {
        best,
        half_cost,
        from_potentials,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, half: f64) -> Vec<f64> {
        (0..n).map(|k| -half + 2.0 * half * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn constant_is_fixed() {
        let phi = GridFunction::on_line(&grid(41, 2.0), |_| 1.5).unwrap();
        let q = hopf_lax(&phi, 0.7).unwrap();
        assert!(q.values.iter().all(|&v| v == 1.5));
    }

    #[test]
    fn quadratic_halves() {
        let xs = grid(401, 4.0);
        let h = xs[1] - xs[0];
        let phi = GridFunction::on_line(&xs, |y| 0.5 * y * y).unwrap();
        let q = hopf_lax(&phi, 1.0).unwrap();
        for (x, v) in xs.iter().zip(&q.values) {
            // minimiser y = x/2 is within h/2 of a grid point
            assert!((v - 0.25 * x * x).abs() <= h * h / 4.0 + 1e-15, "x = {x}");
        }
    }

    #[test]
    fn small_time_recovers_phi() {
        let xs = grid(21, 1.0);
        let phi = GridFunction::on_line(&xs, |y| y.sin()).unwrap();
        let q = hopf_lax(&phi, 1e-6).unwrap();
        assert_eq!(q.values, phi.values);
    }

    #[test]
    fn time_must_be_positive() {
        let phi = GridFunction::on_line(&[0.0, 1.0], |y| y).unwrap();
        assert!(hopf_lax(&phi, 0.0).is_err());
        assert!(hopf_lax(&phi, -1.0).is_err());
    }

    #[test]
    fn point_masses_recover_half_cost() {
        let b = 1.7;
        let mu = DiscreteMeasure::dirac(vec![0.0]).unwrap();
        let nu = DiscreteMeasure::dirac(vec![b]).unwrap();
        let g = kantorovich_duality_gap(&mu, &nu, &[]).unwrap();
        assert!((g.half_cost - 0.5 * b * b).abs() < 1e-14);
        assert!(g.best >= 0.99 * 0.5 * b * b);
        assert!(g.best <= g.half_cost + 1e-12);
    }

    #[test]
    fn equal_measures_have_zero_sup() {
        let mu = DiscreteMeasure::uniform_on_line(&[0.0, 1.0, 2.5]).unwrap();
        let g = kantorovich_duality_gap(&mu, &mu, &[vec![0.3, -1.0, 2.0]]).unwrap();
        assert!(g.best.abs() < 1e-12);
        assert_eq!(g.ratio, 1.0);
    }
}
