//! The biased cube `{-1,+1}^n` with the product Bernoulli measure: local
//! generators, Dirichlet forms, the product semigroup and the functional
//! inequalities they satisfy.

mod dynamics;
mod inequalities;

pub use dynamics::{
    coordinate_generator, dirichlet_form, generator, semigroup_apply, DirichletRepresentation,
};
pub use inequalities::{
    gross_convexity_check, hypercontractivity_check, hypercontractivity_probe,
    hypercontractive_time, lsi_check, poincare_check,
};

use crate::error::{Error, Result};
use crate::measure::{FieldFunction, FiniteSpace, Measure, ProductSpace};

/// Largest supported dimension.
pub const MAX_CUBE_DIMENSION: usize = 20;

/// `ρ = (p - q) / (log p - log q)`, continued by `1/2` at `p = 1/2`.
pub fn rho_of(p: f64) -> f64 {
    if (p - 0.5).abs() < 1e-12 {
        return 0.5;
    }
    let q = 1.0 - p;
    (p - q) / (p.ln() - q.ln())
}

/// `{-1,+1}^n` with `μ_p^n`, where `μ_p(+1) = p`.
#[derive(Debug, Clone)]
pub struct BiasedCube {
    n: usize,
    p: f64,
    rho: f64,
    space: ProductSpace,
}

impl BiasedCube {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if n > MAX_CUBE_DIMENSION {
            return Err(Error::Size {
                what: "cube dimension",
                requested: n as u128,
                limit: MAX_CUBE_DIMENSION as u128,
            });
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::invalid(format!("bias p = {p} must lie in (0, 1)")));
        }
        let space = ProductSpace::power(FiniteSpace::bernoulli_signs(p)?, n)?;
        Ok(Self {
            n,
            p,
            rho: rho_of(p),
            space,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    /// Number of points, `2^n`.
    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weights(&self) -> &[f64] {
        self.space.weights()
    }

    /// Coordinate `i` of point `index` as `±1`.
    pub fn sign(&self, index: usize, i: usize) -> f64 {
        if self.space.coord(index, i) == 1 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn signs(&self, index: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.sign(index, i)).collect()
    }

    /// Bit mask of coordinate `i` in the point index.
    pub(crate) fn bit(&self, i: usize) -> usize {
        self.space.stride(i)
    }

    /// Index of the point with coordinate `i` forced to `-1`.
    pub(crate) fn low(&self, index: usize, i: usize) -> usize {
        index & !self.bit(i)
    }

    pub fn flip(&self, index: usize, i: usize) -> usize {
        index ^ self.bit(i)
    }

    pub(crate) fn check_coordinate(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.n,
            });
        }
        Ok(())
    }

    fn same_as(&self, other: &BiasedCube) -> bool {
        std::ptr::eq(self, other) || (self.n == other.n && self.p == other.p)
    }
}

/// A real function on a [`BiasedCube`], indexed in the cube's point order.
#[derive(Debug, Clone)]
pub struct CubeFunction<'c> {
    cube: &'c BiasedCube,
    values: Vec<f64>,
}

impl<'c> CubeFunction<'c> {
    pub fn new(cube: &'c BiasedCube, values: Vec<f64>) -> Result<Self> {
        if values.len() != cube.len() {
            return Err(Error::Mismatch(format!(
                "{} values for a cube of {} points",
                values.len(),
                cube.len()
            )));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::domain("cube functions may not contain NaN"));
        }
        Ok(Self { cube, values })
    }

    pub fn from_fn(cube: &'c BiasedCube, f: impl FnMut(usize) -> f64) -> Result<Self> {
        Self::new(cube, (0..cube.len()).map(f).collect())
    }

    /// Builds `f` from a function of the sign vector.
    pub fn from_signs(cube: &'c BiasedCube, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        Self::from_fn(cube, |k| f(&cube.signs(k)))
    }

    pub fn constant(cube: &'c BiasedCube, c: f64) -> Result<Self> {
        Self::new(cube, vec![c; cube.len()])
    }

    /// The coordinate function `x ↦ x_i`.
    pub fn coordinate(cube: &'c BiasedCube, i: usize) -> Result<Self> {
        cube.check_coordinate(i)?;
        Self::from_fn(cube, |k| cube.sign(k, i))
    }

    pub fn cube(&self) -> &'c BiasedCube {
        self.cube
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn mean(&self) -> f64 {
        crate::measure::mean_of(self.cube.weights(), &self.values)
    }

    pub fn inner(&self, other: &CubeFunction<'_>) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .cube
            .weights()
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(w, (a, b))| w * a * b)
            .sum())
    }

    /// `‖f‖_r = (∫ |f|^r dμ)^{1/r}` for `r > 0`.
    pub fn norm(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::invalid(format!("norm exponent {r} must be positive")));
        }
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return Ok(0.0);
        }
        let mut acc = 0.0;
        for (w, v) in self.cube.weights().iter().zip(&self.values) {
            let a = v.abs() / scale;
            if a > 0.0 {
                acc += w * (r * a.ln()).exp();
            }
        }
        Ok(scale * (acc.ln() / r).exp())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.cube, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(
        &self,
        other: &CubeFunction<'_>,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<CubeFunction<'c>> {
        self.check_same(other)?;
        Self::new(
            self.cube,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn as_field(&self) -> FieldFunction<'c, ProductSpace> {
        FieldFunction::new(self.cube.space(), self.values.clone())
            .expect("cube function values are valid field values")
    }

    pub(crate) fn check_same(&self, other: &CubeFunction<'_>) -> Result<()> {
        if !self.cube.same_as(other.cube) {
            return Err(Error::Mismatch(
                "cube functions live on different cubes".into(),
            ));
        }
        Ok(())
    }
}
