use serde::{Deserialize, Serialize};

use super::{BiasedCube, CubeFunction};
use crate::error::{Error, Result};

/// Equivalent ways of writing the Dirichlet form `E(f, g)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirichletRepresentation {
    /// `∫ f (-L g) dμ`.
    Generator,
    /// `Σ_i ∫ L_i f · L_i g dμ`.
    SumLi,
    /// `½ Σ_i ∫∫ (f(x) - f(x^{i←y}))(g(x) - g(x^{i←y})) dμ(x) dμ_p(y)`.
    Duplication,
}

impl DirichletRepresentation {
    pub const ALL: [DirichletRepresentation; 3] = [
        DirichletRepresentation::Generator,
        DirichletRepresentation::SumLi,
        DirichletRepresentation::Duplication,
    ];
}

/// Conditional mean of `values` along coordinate `i`, written into `out`.
fn conditional_mean_into(cube: &BiasedCube, values: &[f64], i: usize, out: &mut [f64]) {
    let (p, q) = (cube.p(), cube.q());
    let bit = cube.bit(i);
    for (k, slot) in out.iter_mut().enumerate() {
        let lo = cube.low(k, i);
        *slot = q * values[lo] + p * values[lo | bit];
    }
}

/// `L_i f = ∫ f dμ_p(x_i) - f`.
pub fn coordinate_generator<'c>(f: &CubeFunction<'c>, i: usize) -> Result<CubeFunction<'c>> {
    let cube = f.cube();
    cube.check_coordinate(i)?;
    let mut out = vec![0.0; cube.len()];
    conditional_mean_into(cube, f.values(), i, &mut out);
    for (o, v) in out.iter_mut().zip(f.values()) {
        *o -= v;
    }
    CubeFunction::new(cube, out)
}

/// `L f = Σ_i L_i f`.
pub fn generator<'c>(f: &CubeFunction<'c>) -> CubeFunction<'c> {
    let cube = f.cube();
    let mut acc = vec![0.0; cube.len()];
    let mut mean = vec![0.0; cube.len()];
    for i in 0..cube.n() {
        conditional_mean_into(cube, f.values(), i, &mut mean);
        for ((a, m), v) in acc.iter_mut().zip(&mean).zip(f.values()) {
            *a += m - v;
        }
    }
    CubeFunction::new(cube, acc).expect("generator preserves finiteness")
}

pub fn dirichlet_form(
    f: &CubeFunction<'_>,
    g: &CubeFunction<'_>,
    representation: DirichletRepresentation,
) -> Result<f64> {
    f.check_same(g)?;
    let cube = f.cube();
    let w = cube.weights();
    let value = match representation {
        DirichletRepresentation::Generator => {
            let lg = generator(g);
            -f.inner(&lg)?
        }
        DirichletRepresentation::SumLi => {
            let mut total = 0.0;
            for i in 0..cube.n() {
                let lf = coordinate_generator(f, i)?;
                let lg = coordinate_generator(g, i)?;
                total += lf.inner(&lg)?;
            }
            total
        }
        DirichletRepresentation::Duplication => {
            let (p, q) = (cube.p(), cube.q());
            let (fv, gv) = (f.values(), g.values());
            let mut total = 0.0;
            for i in 0..cube.n() {
                let bit = cube.bit(i);
                for k in 0..cube.len() {
                    // Only y_i ≠ x_i contributes.
                    let j = k ^ bit;
                    let wy = if k & bit == 0 { p } else { q };
                    total += w[k] * wy * (fv[k] - fv[j]) * (gv[k] - gv[j]);
                }
            }
            0.5 * total
        }
    };
    Ok(value)
}

/// `P_t f`, applied one coordinate at a time via
/// `e^{t L_i} h = e^{-t} h + (1 - e^{-t}) ∫ h dμ_p(x_i)`.
pub fn semigroup_apply<'c>(f: &CubeFunction<'c>, t: f64) -> Result<CubeFunction<'c>> {
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("semigroup time {t} must be nonnegative")));
    }
    let cube = f.cube();
    let decay = (-t).exp();
    let mut cur = f.values().to_vec();
    let mut mean = vec![0.0; cube.len()];
    for i in 0..cube.n() {
        conditional_mean_into(cube, &cur, i, &mut mean);
        for (c, m) in cur.iter_mut().zip(&mean) {
            *c = decay * *c + (1.0 - decay) * m;
        }
    }
    CubeFunction::new(cube, cur)
}
