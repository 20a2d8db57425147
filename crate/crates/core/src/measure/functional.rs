use super::space::Measure;
use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// Absolute slack used by the measure-core checkers.
pub const CHECK_TOL: f64 = 1e-10;

/// Tolerance on `∫ f dμ = 1` for densities.
pub const DENSITY_TOL: f64 = 1e-12;

/// A real function on a finite (or product) space, stored as a value table
/// aligned with the space's point order.
#[derive(Debug, Clone)]
pub struct FieldFunction<'s, S: Measure> {
    space: &'s S,
    values: Vec<f64>,
}

impl<'s, S: Measure> FieldFunction<'s, S> {
    pub fn new(space: &'s S, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::Mismatch(format!(
                "{} values for a space of {} points",
                values.len(),
                space.len()
            )));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::domain("field functions may not contain NaN"));
        }
        Ok(Self { space, values })
    }

    pub fn from_fn(space: &'s S, f: impl FnMut(usize) -> f64) -> Result<Self> {
        Self::new(space, (0..space.len()).map(f).collect())
    }

    pub fn constant(space: &'s S, c: f64) -> Result<Self> {
        Self::new(space, vec![c; space.len()])
    }

    pub fn space(&self) -> &'s S {
        self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        mean_of(self.space.weights(), &self.values)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.space, self.values.iter().map(|&v| f(v)).collect())
    }
}

/// `u log u` with the convention `0 log 0 = 0`.
pub fn xlogx(u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u * u.ln()
    }
}

pub fn mean_of(weights: &[f64], values: &[f64]) -> f64 {
    weights.iter().zip(values).map(|(w, v)| w * v).sum()
}

/// `Ent(f)` for a nonnegative table against `weights`.
pub fn entropy_of(weights: &[f64], values: &[f64]) -> Result<f64> {
    if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::domain(format!("entropy of a negative value {v} at point {i}")));
    }
    let m = mean_of(weights, values);
    if m <= 0.0 {
        return Err(Error::domain("entropy of a function with zero integral"));
    }
    // ∫ f log(f/m), which equals ∫ f log f - m log m and cancels better.
    let ent: f64 = weights
        .iter()
        .zip(values)
        .filter(|(_, v)| **v > 0.0)
        .map(|(w, v)| w * v * (v / m).ln())
        .sum();
    Ok(ent.max(0.0))
}

/// Entropy that is zero for the zero function instead of an error.
pub(crate) fn entropy_or_zero(weights: &[f64], values: &[f64]) -> Result<f64> {
    if values.iter().all(|v| *v == 0.0) {
        Ok(0.0)
    } else {
        entropy_of(weights, values)
    }
}

pub fn variance_of(weights: &[f64], values: &[f64]) -> f64 {
    let m = mean_of(weights, values);
    let v: f64 = weights
        .iter()
        .zip(values)
        .map(|(w, x)| w * (x - m) * (x - m))
        .sum();
    v.max(0.0)
}

pub fn entropy<S: Measure>(f: &FieldFunction<'_, S>) -> Result<f64> {
    entropy_of(f.space.weights(), &f.values)
}

pub fn variance<S: Measure>(f: &FieldFunction<'_, S>) -> f64 {
    variance_of(f.space.weights(), &f.values)
}

/// `∫ [f (log f - log c) - (f - c)] dμ`; minimised over `c > 0` at the mean
/// of `f`, where it equals `Ent(f)`.
pub fn variational_entropy<S: Measure>(f: &FieldFunction<'_, S>, c: f64) -> Result<f64> {
    variational_entropy_of(f.space.weights(), &f.values, c)
}

pub(crate) fn variational_entropy_of(weights: &[f64], values: &[f64], c: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::domain(format!("variational constant {c} must be positive")));
    }
    if values.iter().any(|v| *v < 0.0) {
        return Err(Error::domain("variational entropy of a negative function"));
    }
    let lc = c.ln();
    Ok(weights
        .iter()
        .zip(values)
        .map(|(w, &v)| {
            let t = if v == 0.0 { 0.0 } else { v * (v.ln() - lc) };
            w * (t - (v - c))
        })
        .sum())
}

/// Clamping levels `N = 2, 4, ..., 2^20` used for the duality maximiser.
pub fn duality_grid() -> impl Iterator<Item = f64> {
    (1..=20).map(|k| f64::powi(2.0, k))
}

/// Value of `∫ f g dμ` at the maximiser `g = log(f_N / ∫ f_N)` with
/// `f_N = min(max(f, 1/N), N)`. The constraint `∫ e^g dμ = 1` holds exactly.
fn duality_value(weights: &[f64], values: &[f64], clamp: f64) -> f64 {
    let clamped: Vec<f64> = values.iter().map(|v| v.max(1.0 / clamp).min(clamp)).collect();
    let norm = mean_of(weights, &clamped);
    weights
        .iter()
        .zip(values)
        .zip(&clamped)
        .map(|((w, f), c)| if *f == 0.0 { 0.0 } else { w * f * (c / norm).ln() })
        .sum()
}

/// `(N, Ent(f) - ∫ f g_N dμ)` along the clamping grid.
pub fn duality_gap_profile<S: Measure>(f: &FieldFunction<'_, S>) -> Result<Vec<(f64, f64)>> {
    let ent = entropy(f)?;
    let w = f.space.weights();
    Ok(duality_grid()
        .map(|n| (n, ent - duality_value(w, &f.values, n)))
        .collect())
}

/// `Ent(f)` minus the best value of the duality functional over the clamping
/// grid. Nonnegative up to rounding; zero once `f` lies in `[1/N, N]`.
pub fn entropy_duality_gap<S: Measure>(f: &FieldFunction<'_, S>) -> Result<f64> {
    let profile = duality_gap_profile(f)?;
    Ok(profile.iter().map(|(_, g)| *g).fold(f64::INFINITY, f64::min))
}

/// `∫ f g dμ <= ∫ f log f dμ + log ∫ e^g dμ` for a density `f`.
pub fn entropic_bound<S: Measure>(
    f: &FieldFunction<'_, S>,
    g: &FieldFunction<'_, S>,
) -> Result<VerificationReport> {
    if f.values.len() != g.values.len() {
        return Err(Error::Mismatch("f and g live on different spaces".into()));
    }
    if f.values.iter().any(|v| *v < 0.0) {
        return Err(Error::domain("entropic inequality needs f >= 0"));
    }
    let mass = f.mean();
    if (mass - 1.0).abs() > DENSITY_TOL {
        return Err(Error::domain(format!("f integrates to {mass}, not a density")));
    }
    let w = f.space.weights();
    let lhs: f64 = w
        .iter()
        .zip(&f.values)
        .zip(&g.values)
        .map(|((w, f), g)| if *f == 0.0 { 0.0 } else { w * f * g })
        .sum();
    let f_log_f: f64 = w.iter().zip(&f.values).map(|(w, f)| w * xlogx(*f)).sum();
    let rhs = f_log_f + log_mean_exp(w, &g.values);
    Ok(VerificationReport::new("entropic_inequality", lhs, rhs, CHECK_TOL))
}

/// `log ∫ e^g dμ`, shifted by the maximum for stability.
pub fn log_mean_exp(weights: &[f64], values: &[f64]) -> f64 {
    let top = weights
        .iter()
        .zip(values)
        .filter(|(w, _)| **w > 0.0)
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = weights.iter().zip(values).map(|(w, v)| w * (v - top).exp()).sum();
    top + s.ln()
}
