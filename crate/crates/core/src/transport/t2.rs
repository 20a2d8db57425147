//! The quadratic transportation cost inequality W₂(μ,γ)² ≤ 2H(μ|γ) for
//! μ = f·γ on the real line.
//!
//! Both μ and γ are cut into `m` cells of equal mass along their quantiles,
//! each cell collapsed to its conditional mean; the discrete W₂² is then a
//! lower bound for the continuum one. The entropy side is a Gauss–Hermite
//! integral of f log f.

use super::{relative_entropy, w2, DiscreteMeasure};
use crate::error::{Error, Result};
use crate::gauss::QuadratureRule;
use crate::report::VerificationReport;

/// Slack on the discrete inequality.
pub const T2_TOL: f64 = 1e-6;

const SUPPORT_HALF_WIDTH: f64 = 12.0;
const PANELS: usize = 960;
const PANEL_ORDER: usize = 10;

/// Shift density f(x) = e^{bx − b²/2}: f·γ is γ translated by b.
pub fn shift_density(b: f64) -> impl Fn(f64) -> f64 + Clone {
    move |x| (b * x - 0.5 * b * b).exp()
}

fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(k);
    let mut weights = Vec::with_capacity(k);
    for i in 0..k {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for n in 2..=k {
                let n = n as f64;
                let p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
                p0 = p1;
                p1 = p2;
            }
            dp = k as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

fn gaussian_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

struct PanelIntegrator {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl PanelIntegrator {
    // (∫ g, ∫ x g) over [a, b].
    fn moments(&self, g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let (mut m0, mut m1) = (0.0, 0.0);
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            let x = mid + half * t;
            let v = w * g(x);
            m0 += v;
            m1 += v * x;
        }
        (m0 * half, m1 * half)
    }
}

/// Equal-mass quantile cells of the measure with density `f·φ` (φ the
/// standard normal density), each represented by its conditional mean.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileCells {
    /// Interior cut points, `m − 1` of them.
    pub cuts: Vec<f64>,
    /// Conditional mean of each cell.
    pub means: Vec<f64>,
    /// ∫ f dγ over the integration window.
    pub mass: f64,
}

impl QuantileCells {
    pub fn measure(&self) -> Result<DiscreteMeasure> {
        let m = self.means.len();
        DiscreteMeasure::new(self.means.iter().map(|&x| vec![x]).collect(), vec![1.0 / m as f64; m])
    }
}

pub fn quantile_cells(density: &dyn Fn(f64) -> f64, m: usize) -> Result<QuantileCells> {
    if m == 0 {
        return Err(Error::invalid("need at least one cell"));
    }
    let (nodes, weights) = gauss_legendre(PANEL_ORDER);
    let quad = PanelIntegrator { nodes, weights };
    let g = |x: f64| density(x) * gaussian_pdf(x);
    let width = 2.0 * SUPPORT_HALF_WIDTH / PANELS as f64;
    let edge = |p: usize| -SUPPORT_HALF_WIDTH + p as f64 * width;

    let mut cum0 = Vec::with_capacity(PANELS + 1);
    let mut cum1 = Vec::with_capacity(PANELS + 1);
    let (mut s0, mut s1) = (0.0, 0.0);
    cum0.push(0.0);
    cum1.push(0.0);
    for p in 0..PANELS {
        let (a, b) = quad.moments(&g, edge(p), edge(p + 1));
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::domain(format!(
                "density is not positive and finite on [{}, {}]",
                edge(p),
                edge(p + 1)
            )));
        }
        s0 += a;
        s1 += b;
        cum0.push(s0);
        cum1.push(s1);
    }
    let total = s0;

    let mut cuts = Vec::with_capacity(m.saturating_sub(1));
    let mut first = vec![0.0];
    for k in 1..m {
        let target = total * k as f64 / m as f64;
        let p = cum0.partition_point(|&c| c <= target).saturating_sub(1).min(PANELS - 1);
        let (a0, mut lo, mut hi) = (edge(p), edge(p), edge(p + 1));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if cum0[p] + quad.moments(&g, a0, mid).0 < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = 0.5 * (lo + hi);
        cuts.push(x);
        first.push(cum1[p] + quad.moments(&g, a0, x).1);
    }
    first.push(s1);
    let cell = total / m as f64;
    let means = first.windows(2).map(|w| (w[1] - w[0]) / cell).collect();
    Ok(QuantileCells {
        cuts,
        means,
        mass: total,
    })
}

fn entropy_side(density: &dyn Fn(f64) -> f64, rule: &QuadratureRule) -> Result<f64> {
    let values: Vec<f64> = rule.nodes().iter().map(|&x| density(x)).collect();
    if let Some((k, v)) = values.iter().enumerate().find(|(_, v)| !(**v > 0.0) || !v.is_finite()) {
        return Err(Error::domain(format!(
            "density must be positive: f({}) = {v}",
            rule.nodes()[k]
        )));
    }
    let z = rule.integrate_values(&values);
    let h: f64 = rule
        .weights()
        .iter()
        .zip(&values)
        .map(|(w, &f)| {
            let r = f / z;
            w * r * r.ln()
        })
        .sum();
    Ok(2.0 * h.max(0.0))
}

/// W₂(μ_m, γ_m)² ≤ 2∫ f log f dγ with `order` quantile cells on each side
/// and an `order`-node Gauss–Hermite rule for the entropy; `f` is
/// normalised internally.
pub fn t2_check(density: &dyn Fn(f64) -> f64, order: usize) -> Result<VerificationReport> {
    let rule = QuadratureRule::gauss_hermite(order)?;
    let rhs = entropy_side(density, &rule)?;
    let mu = quantile_cells(density, order)?.measure()?;
    let gamma = quantile_cells(&|_| 1.0, order)?.measure()?;
    let sol = w2(&mu, &gamma)?;
    if !sol.certified() {
        return Err(Error::precondition_with(
            "transport solve failed its certificate",
            format!(
                "marginals {:e}, dual violation {:e}, gap {:e}",
                sol.marginal_error, sol.dual_violation, sol.gap
            ),
        ));
    }
    Ok(VerificationReport::new("t2_transport", sol.cost, rhs, T2_TOL).with_note(format!(
        "{order} quantile cells per side, entropy by {order}-node Gauss-Hermite, {} pivots",
        sol.pivots
    )))
}

/// The fixed-support scheme: γ is the Gauss–Hermite rule itself (tensorised
/// for d = 2) and μ reweights its nodes by f. Diagnostic only.
pub fn t2_reweighted(
    density: &dyn Fn(&[f64]) -> f64,
    order: usize,
    dim: usize,
) -> Result<VerificationReport> {
    if !(1..=2).contains(&dim) {
        return Err(Error::invalid(format!("dimension {dim} outside 1..=2")));
    }
    let rule = QuadratureRule::gauss_hermite(order)?;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    if dim == 1 {
        for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
            points.push(vec![x]);
            weights.push(w);
        }
    } else {
        for (&x, &wx) in rule.nodes().iter().zip(rule.weights()) {
            for (&y, &wy) in rule.nodes().iter().zip(rule.weights()) {
                points.push(vec![x, y]);
                weights.push(wx * wy);
            }
        }
    }
    let mut masses = Vec::with_capacity(points.len());
    for (p, w) in points.iter().zip(&weights) {
        let f = density(p);
        if !(f > 0.0) || !f.is_finite() {
            return Err(Error::domain(format!("density must be positive: f({p:?}) = {f}")));
        }
        masses.push(w * f);
    }
    let gamma = DiscreteMeasure::normalized(points.clone(), weights)?;
    let mu = DiscreteMeasure::normalized(points, masses)?;
    let sol = w2(&mu, &gamma)?;
    let h = relative_entropy(&mu, &gamma)?;
    let mut report = VerificationReport::new("t2_reweighted", sol.cost, 2.0 * h.value, T2_TOL)
        .with_note(format!("fixed {order}-node support in d = {dim}, diagnostic only"));
    if !sol.certified() {
        report = report.with_note("transport certificate failed");
    }
    Ok(report)
}
