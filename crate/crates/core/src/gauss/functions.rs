use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::quadrature::QuadratureRule;
use crate::error::{Error, Result};
use crate::rng::LabRng;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A smooth real function on ℝ with its derivative and a Lipschitz bound.
#[derive(Clone)]
pub struct SmoothTestFunction {
    name: String,
    f: RealFn,
    df: RealFn,
    lipschitz_bound: f64,
}

impl fmt::Debug for SmoothTestFunction {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("SmoothTestFunction")
            .field("name", &self.name)
            .field("lipschitz_bound", &self.lipschitz_bound)
            .finish()
    }
}

impl SmoothTestFunction {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lipschitz_bound: f64,
    ) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
            df: Arc::new(df),
            lipschitz_bound,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (self.df)(x)
    }

    pub fn lipschitz_bound(&self) -> f64 {
        self.lipschitz_bound
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("const({c})"), move |_| c, |_| 0.0, 0.0)
    }

    /// `a + b x`.
    pub fn affine(a: f64, b: f64) -> Self {
        Self::new(format!("affine({a},{b})"), move |x| a + b * x, move |_| b, b.abs())
    }

    /// `e^{bx/2}`, the equality case of the Gaussian LSI. Not globally
    /// Lipschitz; the bound recorded is infinite.
    pub fn exp_half(b: f64) -> Self {
        Self::new(
            format!("exp_half({b})"),
            move |x| (0.5 * b * x).exp(),
            move |x| 0.5 * b * (0.5 * b * x).exp(),
            f64::INFINITY,
        )
    }

    /// `√(x² + ε²)`, a smoothing of `|x|`.
    pub fn smoothed_abs(eps: f64) -> Self {
        Self::new(
            format!("smoothed_abs({eps})"),
            move |x| x.hypot(eps),
            move |x| x / x.hypot(eps),
            1.0,
        )
    }

    /// `x²`; Lipschitz only on bounded sets, bound infinite.
    pub fn square() -> Self {
        Self::new("square", |x| x * x, |x| 2.0 * x, f64::INFINITY)
    }

    /// A seeded 1-Lipschitz function
    /// `c x + Σ_k a_k sin(ω_k x + φ_k) + s √(x² + ε²)` with
    /// `|c| + Σ|a_k ω_k| + |s| <= 1`.
    pub fn random_lipschitz(rng: &mut LabRng) -> Self {
        let terms = rng.random_range(1..=4usize);
        let mut budget: Vec<f64> = (0..terms + 2).map(|_| rng.random::<f64>()).collect();
        let total: f64 = budget.iter().sum::<f64>() / rng.random_range(0.5..=1.0);
        for b in budget.iter_mut() {
            *b /= total;
        }
        let c = if rng.random::<bool>() { budget[0] } else { -budget[0] };
        let s = if rng.random::<bool>() { budget[1] } else { -budget[1] };
        let eps = rng.random_range(0.5..1.5);
        let waves: Vec<(f64, f64, f64)> = budget[2..]
            .iter()
            .map(|&share| {
                let omega = rng.random_range(0.2..3.0);
                let phase = rng.random_range(0.0..std::f64::consts::TAU);
                (share / omega, omega, phase)
            })
            .collect();
        let lip = c.abs() + s.abs() + waves.iter().map(|(a, w, _)| a * w).sum::<f64>();
        let wf = waves.clone();
        Self::new(
            "random_lipschitz",
            move |x| {
                c * x
                    + s * x.hypot(eps)
                    + wf.iter().map(|(a, w, ph)| a * (w * x + ph).sin()).sum::<f64>()
            },
            move |x| {
                c + s * x / x.hypot(eps)
                    + waves.iter().map(|(a, w, ph)| a * w * (w * x + ph).cos()).sum::<f64>()
            },
            lip,
        )
    }

    /// A seeded strictly positive smooth density shape
    /// `exp(c x + Σ_k a_k sin(ω_k x + φ_k))` (not normalised).
    pub fn random_positive(rng: &mut LabRng) -> Self {
        let c = rng.random_range(-1.0..1.0);
        let waves: Vec<(f64, f64, f64)> = (0..rng.random_range(1..=3usize))
            .map(|_| {
                (
                    rng.random_range(-0.8..0.8),
                    rng.random_range(0.2..2.0),
                    rng.random_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        let wf = waves.clone();
        let log = move |x: f64| c * x + wf.iter().map(|(a, w, ph)| a * (w * x + ph).sin()).sum::<f64>();
        let log2 = log.clone();
        Self::new(
            "random_positive",
            move |x| log(x).exp(),
            move |x| {
                let d = c + waves.iter().map(|(a, w, ph)| a * w * (w * x + ph).cos()).sum::<f64>();
                d * log2(x).exp()
            },
            f64::INFINITY,
        )
    }

    /// Checks the declared derivative against centered differences and the
    /// declared Lipschitz bound on the nodes of `rule`.
    pub fn validate(&self, rule: &QuadratureRule) -> Result<()> {
        let h = 1e-5;
        for &x in rule.nodes() {
            let d = self.derivative(x);
            let fd = (self.eval(x + h) - self.eval(x - h)) / (2.0 * h);
            let scale = 1.0f64.max(d.abs()).max(self.eval(x).abs());
            if !((fd - d).abs() <= 1e-6 * scale) {
                return Err(Error::precondition_with(
                    format!("{}: derivative disagrees with finite differences", self.name),
                    format!("x = {x}, derivative = {d}, difference = {fd}"),
                ));
            }
            if !(d.abs() <= self.lipschitz_bound * (1.0 + 1e-12)) {
                return Err(Error::precondition_with(
                    format!("{}: derivative exceeds the Lipschitz bound", self.name),
                    format!("x = {x}, |f'| = {}", d.abs()),
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn builtin_functions_validate() {
        let rule = QuadratureRule::gauss_hermite(64).unwrap();
        for f in [
            SmoothTestFunction::constant(2.0),
            SmoothTestFunction::affine(1.0, -0.5),
            SmoothTestFunction::exp_half(1.0),
            SmoothTestFunction::smoothed_abs(1e-3),
            SmoothTestFunction::square(),
        ] {
            f.validate(&rule).unwrap();
        }
    }

    #[test]
    fn random_families_validate() {
        let rule = QuadratureRule::gauss_hermite(64).unwrap();
        for s in 0..50 {
            let mut r = stream(11, s);
            let f = SmoothTestFunction::random_lipschitz(&mut r);
            assert!(f.lipschitz_bound() <= 1.0 + 1e-12);
            f.validate(&rule).unwrap();
            let g = SmoothTestFunction::random_positive(&mut r);
            g.validate(&rule).unwrap();
            assert!(rule.nodes().iter().all(|&x| g.eval(x) > 0.0));
        }
    }

    #[test]
    fn wrong_derivative_is_caught() {
        let rule = QuadratureRule::gauss_hermite(16).unwrap();
        let bad = SmoothTestFunction::new("bad", |x| x.sin(), |x| x.sin(), 1.0);
        assert!(bad.validate(&rule).is_err());
        let steep = SmoothTestFunction::new("steep", |x| 2.0 * x, |_| 2.0, 1.0);
        assert!(steep.validate(&rule).is_err());
    }
}
