use serde::{Deserialize, Serialize};

use crate::linalg::solve_dense;

/// Slack of the optimality certificate `⟨z, v - z⟩ >= -CERT_TOL`.
pub const CERT_TOL: f64 = 1e-8;

const PIVOT_TOL: f64 = 1e-12;

/// Nearest point to the origin in the convex hull of a finite point list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinNormResult {
    pub point: Vec<f64>,
    pub distance: f64,
    /// Convex weights over the input points.
    pub coefficients: Vec<f64>,
    /// `min_v ⟨z, v - z⟩` over the input points.
    pub certificate: f64,
    pub iterations: usize,
}

impl MinNormResult {
    pub fn certificate_holds(&self) -> bool {
        self.certificate >= -CERT_TOL
            && self.coefficients.iter().all(|&c| c >= 0.0)
            && (self.coefficients.iter().sum::<f64>() - 1.0).abs() <= 1e-10
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn combine(points: &[Vec<f64>], set: &[usize], lam: &[f64], dim: usize) -> Vec<f64> {
    let mut x = vec![0.0; dim];
    for (&j, &l) in set.iter().zip(lam) {
        for (xi, pi) in x.iter_mut().zip(&points[j]) {
            *xi += l * pi;
        }
    }
    x
}

/// Affine minimiser of `|Σ μ_k p_k|` subject to `Σ μ_k = 1` over `set`.
fn affine_minimizer(points: &[Vec<f64>], set: &[usize]) -> Option<Vec<f64>> {
    let k = set.len();
    let size = k + 1;
    let mut a = vec![0.0; size * size];
    let mut b = vec![0.0; size];
    for r in 0..k {
        for c in 0..k {
            a[r * size + c] = dot(&points[set[r]], &points[set[c]]);
        }
        a[r * size + k] = 1.0;
        a[k * size + r] = 1.0;
    }
    b[k] = 1.0;
    let sol = solve_dense(&a, &b, PIVOT_TOL)?;
    Some(sol[..k].to_vec())
}

/// Wolfe's minimum-norm-point algorithm. `points` must be non-empty and
/// all of the same dimension.
pub fn wolfe_min_norm(points: &[Vec<f64>]) -> MinNormResult {
    assert!(!points.is_empty(), "min-norm point of an empty set");
    let dim = points[0].len();
    let m = points.len();
    let scale = points
        .iter()
        .map(|p| dot(p, p))
        .fold(1.0f64, f64::max);
    let start = (0..m)
        .min_by(|&a, &b| dot(&points[a], &points[a]).total_cmp(&dot(&points[b], &points[b])))
        .unwrap();
    let mut set = vec![start];
    let mut lam = vec![1.0];
    let mut x = points[start].clone();
    let mut iterations = 0;
    let max_major = 50 * m + 100;
    'major: while iterations < max_major {
        iterations += 1;
        let xx = dot(&x, &x);
        if xx <= 1e-30 {
            break;
        }
        let (j, xj) = (0..m)
            .map(|j| (j, dot(&x, &points[j])))
            .fold((usize::MAX, f64::INFINITY), |acc, cur| if cur.1 < acc.1 { cur } else { acc });
        if xx - xj <= PIVOT_TOL * scale || set.contains(&j) {
            break;
        }
        set.push(j);
        lam.push(0.0);
        loop {
            let Some(mu) = affine_minimizer(points, &set) else {
                // Numerically dependent support; keep the last feasible point.
                set.pop();
                lam.pop();
                break 'major;
            };
            if mu.iter().all(|&v| v > PIVOT_TOL) {
                lam = mu;
                break;
            }
            let mut theta = f64::INFINITY;
            let mut drop = 0;
            for (k, (&l, &u)) in lam.iter().zip(&mu).enumerate() {
                if u <= PIVOT_TOL {
                    let denom = l - u;
                    let t = if denom > 0.0 { l / denom } else { 0.0 };
                    if t < theta {
                        theta = t;
                        drop = k;
                    }
                }
            }
            let theta = theta.clamp(0.0, 1.0);
            for (l, u) in lam.iter_mut().zip(&mu) {
                *l = (1.0 - theta) * *l + theta * u;
            }
            lam[drop] = 0.0;
            let mut k = 0;
            while k < set.len() {
                if lam[k] <= PIVOT_TOL {
                    set.remove(k);
                    lam.remove(k);
                } else {
                    k += 1;
                }
            }
            if set.is_empty() {
                set.push(j);
                lam.push(1.0);
            }
            let total: f64 = lam.iter().sum();
            for l in lam.iter_mut() {
                *l /= total;
            }
        }
        x = combine(points, &set, &lam, dim);
    }
    let mut coefficients = vec![0.0; m];
    let total: f64 = lam.iter().map(|l| l.max(0.0)).sum();
    for (&j, &l) in set.iter().zip(&lam) {
        coefficients[j] = l.max(0.0) / total;
    }
    let point = combine(points, &set, &lam.iter().map(|l| l.max(0.0) / total).collect::<Vec<_>>(), dim);
    let zz = dot(&point, &point);
    let certificate = points
        .iter()
        .map(|v| dot(&point, v) - zz)
        .fold(f64::INFINITY, f64::min);
    MinNormResult {
        distance: zz.sqrt(),
        point,
        coefficients,
        certificate,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_point() {
        let r = wolfe_min_norm(&[vec![1.0, 1.0]]);
        assert_abs_diff_eq!(r.distance, 2f64.sqrt(), epsilon = 1e-15);
        assert!(r.certificate_holds());
    }

    #[test]
    fn segment_projection() {
        let r = wolfe_min_norm(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_abs_diff_eq!(r.distance, 0.5f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(r.point[0], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(r.coefficients[1], 0.5, epsilon = 1e-14);
        assert!(r.certificate_holds());
    }

    #[test]
    fn origin_in_the_list() {
        let r = wolfe_min_norm(&[vec![1.0, 0.0, 1.0], vec![0.0; 3], vec![1.0, 1.0, 1.0]]);
        assert_eq!(r.distance, 0.0);
        assert_eq!(r.coefficients[1], 1.0);
    }

    #[test]
    fn triangle_face_and_redundant_points() {
        let pts = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
            vec![1.0, 1.0, 1.0],
            vec![0.0, 1.0, 1.0],
        ];
        let r = wolfe_min_norm(&pts);
        assert_abs_diff_eq!(r.distance, (1.0f64 / 3.0).sqrt(), epsilon = 1e-14);
        assert!(r.certificate_holds());
        assert_eq!(r.coefficients[3..], [0.0, 0.0, 0.0]);
    }

    #[test]
    fn mixed_face_of_lower_dimension() {
        let pts = vec![vec![1.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 1.0], vec![0.0, 1.0, 0.0, 0.0]];
        let r = wolfe_min_norm(&pts);
        assert_abs_diff_eq!(r.distance, (2.0f64 / 3.0).sqrt(), epsilon = 1e-14);
        assert!(r.certificate_holds());
    }
}
