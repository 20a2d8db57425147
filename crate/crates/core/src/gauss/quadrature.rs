use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigenvalues;

/// Default Gauss–Hermite order used by the Gaussian checks.
pub const DEFAULT_ORDER: usize = 64;

/// Largest supported order; beyond this the outer nodes overflow the
/// Christoffel sums.
pub const MAX_ORDER: usize = 256;

/// Orthonormal Hermite values `p_0(x), …, p_{n}(x)` for the standard
/// Gaussian, from `p_{k+1} = (x p_k - √k p_{k-1}) / √(k+1)`.
fn orthonormal_hermite(x: f64, n: usize) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(1.0);
    if n >= 1 {
        p.push(x);
    }
    for k in 1..n {
        let next = (x * p[k] - (k as f64).sqrt() * p[k - 1]) / ((k + 1) as f64).sqrt();
        p.push(next);
    }
    p
}

/// Gauss–Hermite rule for the standard Gaussian measure `γ`, with weights
/// normalised to total mass 1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Nodes are the eigenvalues of the Jacobi matrix of the probabilists'
    /// Hermite recurrence, refined by Newton steps on `p_n`.
    pub fn gauss_hermite(order: usize) -> Result<Self> {
        if order == 0 || order > MAX_ORDER {
            return Err(Error::invalid(format!(
                "quadrature order {order} outside 1..={MAX_ORDER}"
            )));
        }
        let diag = vec![0.0; order];
        let off: Vec<f64> = (1..order).map(|k| (k as f64).sqrt()).collect();
        let mut nodes = tridiagonal_eigenvalues(&diag, &off);
        let sn = (order as f64).sqrt();
        for x in nodes.iter_mut() {
            for _ in 0..4 {
                let p = orthonormal_hermite(*x, order);
                let deriv = sn * p[order - 1];
                if deriv == 0.0 {
                    break;
                }
                let step = p[order] / deriv;
                *x -= step;
                if step.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
        }
        // Symmetrise: the rule is exactly symmetric about 0.
        for i in 0..order / 2 {
            let j = order - 1 - i;
            let m = 0.5 * (nodes[j] - nodes[i]);
            nodes[i] = -m;
            nodes[j] = m;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        let mut weights: Vec<f64> = nodes
            .iter()
            .map(|&x| {
                let p = orthonormal_hermite(x, order - 1);
                1.0 / p.iter().map(|v| v * v).sum::<f64>()
            })
            .collect();
        let total: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= total;
        }
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫ g dγ` by the rule.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }

    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}
