use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::functions::SmoothTestFunction;
use super::quadrature::QuadratureRule;
use crate::error::{Error, Result};
use crate::measure::xlogx;
use crate::report::VerificationReport;
use crate::rng::stream;

/// Smallest order accepted by the LSI checks.
pub const MIN_LSI_ORDER: usize = 16;
/// Slack for quadrature-evaluated LSI sides.
pub const LSI_TOL: f64 = 1e-8;
/// Slack for the Herbst MGF comparison.
pub const HERBST_TOL: f64 = 1e-9;
/// Fewest Monte Carlo samples accepted by the concentration check.
pub const MIN_SAMPLES: usize = 10_000;
/// Largest dimension of the separable product check.
pub const MAX_PRODUCT_DIMENSION: usize = 3;

const MC_CHUNK: usize = 1 << 14;

fn check_order(rule: &QuadratureRule) -> Result<()> {
    if rule.order() < MIN_LSI_ORDER {
        return Err(Error::invalid(format!(
            "quadrature order {} below the minimum {MIN_LSI_ORDER}",
            rule.order()
        )));
    }
    Ok(())
}

/// `Ent(g) = ∫ g log g − (∫g) log ∫g` for tabulated `g >= 0`.
fn entropy_table(weights: &[f64], g: &[f64]) -> f64 {
    let m: f64 = weights.iter().zip(g).map(|(w, v)| w * v).sum();
    let a: f64 = weights.iter().zip(g).map(|(w, &v)| w * xlogx(v)).sum();
    (a - xlogx(m)).max(0.0)
}

/// `Ent_γ(f²) <= 2 ∫ |f'|² dγ`.
pub fn gaussian_lsi_check(
    f: &SmoothTestFunction,
    rule: &QuadratureRule,
) -> Result<VerificationReport> {
    check_order(rule)?;
    let sq: Vec<f64> = rule.nodes().iter().map(|&x| f.eval(x).powi(2)).collect();
    let lhs = entropy_table(rule.weights(), &sq);
    let rhs = 2.0 * rule.integrate(|x| f.derivative(x).powi(2));
    Ok(VerificationReport::new("gaussian_lsi", lhs, rhs, LSI_TOL).with_witness(f.name()))
}

/// `∫ h log h dγ − (∫h) log ∫h <= ½ ∫ h'²/h dγ` for `h > 0`.
pub fn fisher_lsi_check(
    h: &SmoothTestFunction,
    rule: &QuadratureRule,
) -> Result<VerificationReport> {
    check_order(rule)?;
    let mut vals = Vec::with_capacity(rule.order());
    for &x in rule.nodes() {
        let v = h.eval(x);
        if !(v > 0.0) {
            return Err(Error::domain(format!("{}: not positive at x = {x}", h.name())));
        }
        vals.push(v);
    }
    let lhs = entropy_table(rule.weights(), &vals);
    let rhs = 0.5
        * rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .zip(&vals)
            .map(|((&x, &w), &v)| w * h.derivative(x).powi(2) / v)
            .sum::<f64>();
    Ok(VerificationReport::new("gaussian_fisher_lsi", lhs, rhs, LSI_TOL).with_witness(h.name()))
}

/// `P_t f(x) = ∫ f(e^{-t} x + √(1 - e^{-2t}) y) dγ(y)`, by quadrature in `y`.
pub fn ou_eval(f: &SmoothTestFunction, t: f64, x: f64, rule: &QuadratureRule) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("semigroup time {t} must be nonnegative")));
    }
    if t == 0.0 {
        return Ok(f.eval(x));
    }
    let a = (-t).exp();
    let s = (-(-2.0 * t).exp_m1()).sqrt();
    Ok(rule.integrate(|y| f.eval(a * x + s * y)))
}

/// `P_t f` tabulated on the nodes of `rule`.
pub fn ou_apply(f: &SmoothTestFunction, t: f64, rule: &QuadratureRule) -> Result<Vec<f64>> {
    rule.nodes().iter().map(|&x| ou_eval(f, t, x, rule)).collect()
}

fn check_lipschitz(f: &SmoothTestFunction, rule: &QuadratureRule) -> Result<()> {
    if !(f.lipschitz_bound() <= 1.0) {
        return Err(Error::precondition_with(
            "Herbst check needs a 1-Lipschitz function",
            format!("{}: declared bound {}", f.name(), f.lipschitz_bound()),
        ));
    }
    f.validate(rule)
}

/// `∫ e^{λF} dγ <= exp(λ ∫F dγ + λ²/2)` for each λ.
pub fn herbst_mgf_check(
    f: &SmoothTestFunction,
    lambdas: &[f64],
    rule: &QuadratureRule,
) -> Result<Vec<VerificationReport>> {
    check_lipschitz(f, rule)?;
    let vals: Vec<f64> = rule.nodes().iter().map(|&x| f.eval(x)).collect();
    let mean = rule.integrate_values(&vals);
    Ok(lambdas
        .iter()
        .map(|&l| {
            let lhs: f64 = rule
                .weights()
                .iter()
                .zip(&vals)
                .map(|(w, v)| w * (l * v).exp())
                .sum();
            let rhs = (l * mean + 0.5 * l * l).exp();
            VerificationReport::new("herbst_mgf", lhs, rhs, HERBST_TOL)
                .with_witness(format!("{} lambda={l}", f.name()))
        })
        .collect())
}

/// Evaluates `F` at `samples` seeded standard normal draws. Draws are
/// produced in fixed chunks, each from its own stream, so the result does
/// not depend on the thread count.
pub fn gaussian_samples(f: &SmoothTestFunction, samples: usize, seed: u64) -> Vec<f64> {
    let chunks = samples.div_ceil(MC_CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = stream(seed, c as u64);
            let len = MC_CHUNK.min(samples - c * MC_CHUNK);
            (0..len)
                .map(|_| f.eval(StandardNormal.sample(&mut rng)))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// `γ(F >= ∫F dγ + r) <= exp(-r² / 2‖F‖²_Lip)` against a seeded Monte Carlo
/// tail. Passes when the empirical tail is within three binomial standard
/// errors (at the bound) of the bound.
pub fn gaussian_concentration_check(
    f: &SmoothTestFunction,
    r_grid: &[f64],
    samples: usize,
    seed: u64,
    rule: &QuadratureRule,
) -> Result<Vec<VerificationReport>> {
    if samples < MIN_SAMPLES {
        return Err(Error::invalid(format!(
            "{samples} samples below the minimum {MIN_SAMPLES}"
        )));
    }
    let lip = f.lipschitz_bound();
    if !(lip > 0.0 && lip.is_finite()) {
        return Err(Error::precondition(format!(
            "{}: needs a finite positive Lipschitz bound",
            f.name()
        )));
    }
    if let Some(r) = r_grid.iter().find(|r| !(**r >= 0.0)) {
        return Err(Error::invalid(format!("deviation {r} must be nonnegative")));
    }
    f.validate(rule)?;
    let mean = rule.integrate(|x| f.eval(x));
    let draws = gaussian_samples(f, samples, seed);
    let n = samples as f64;
    Ok(r_grid
        .iter()
        .map(|&r| {
            let hits = draws.iter().filter(|&&v| v >= mean + r).count();
            let emp = hits as f64 / n;
            let bound = (-r * r / (2.0 * lip * lip)).exp();
            let se = (bound * (1.0 - bound) / n).sqrt();
            VerificationReport::new("gaussian_concentration", emp, bound, 3.0 * se)
                .with_witness(format!("{} r={r}", f.name()))
        })
        .collect())
}

/// LSI for a separable `f(x) = Π_k f_k(x_k)` on ℝ^d, `d <= 3`, evaluated on
/// the tensor grid of `rule`.
pub fn product_lsi_check(
    factors: &[SmoothTestFunction],
    rule: &QuadratureRule,
) -> Result<VerificationReport> {
    check_order(rule)?;
    let d = factors.len();
    if d == 0 || d > MAX_PRODUCT_DIMENSION {
        return Err(Error::invalid(format!(
            "product dimension {d} outside 1..={MAX_PRODUCT_DIMENSION}"
        )));
    }
    let m = rule.order();
    let vals: Vec<Vec<f64>> = factors
        .iter()
        .map(|f| rule.nodes().iter().map(|&x| f.eval(x)).collect())
        .collect();
    let ders: Vec<Vec<f64>> = factors
        .iter()
        .map(|f| rule.nodes().iter().map(|&x| f.derivative(x)).collect())
        .collect();
    let total = m.pow(d as u32);
    let mut weights = Vec::with_capacity(total);
    let mut sq = Vec::with_capacity(total);
    let mut grad = 0.0;
    let mut idx = vec![0usize; d];
    for _ in 0..total {
        let w: f64 = idx.iter().map(|&i| rule.weights()[i]).product();
        let fv: f64 = (0..d).map(|k| vals[k][idx[k]]).product();
        let g2: f64 = (0..d)
            .map(|k| {
                let others: f64 = (0..d)
                    .filter(|&j| j != k)
                    .map(|j| vals[j][idx[j]])
                    .product();
                (ders[k][idx[k]] * others).powi(2)
            })
            .sum();
        weights.push(w);
        sq.push(fv * fv);
        grad += w * g2;
        for k in (0..d).rev() {
            idx[k] += 1;
            if idx[k] < m {
                break;
            }
            idx[k] = 0;
        }
    }
    let lhs = entropy_table(&weights, &sq);
    let names: Vec<&str> = factors.iter().map(|f| f.name()).collect();
    Ok(VerificationReport::new("gaussian_product_lsi", lhs, 2.0 * grad, LSI_TOL)
        .with_witness(names.join(" x ")))
}
