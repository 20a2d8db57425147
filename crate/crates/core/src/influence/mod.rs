//! The L¹–L² variance inequality on the biased cube, in its semigroup form
//! and its original `{0,1}^n` form, and the influence bounds it implies.

mod sets;

pub use sets::{influences, kkl_check, CubeSet, InfluenceProfile};

use serde::{Deserialize, Serialize};

use crate::cube::{coordinate_generator, CubeFunction};
use crate::error::Result;
use crate::measure::{variance_of, FieldFunction, ProductSpace};
use crate::report::VerificationReport;

/// Base slack for the L¹–L² checks, scaled by the size of the sides.
pub const L1L2_TOL: f64 = 1e-10;

/// Which statement of the inequality to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum L1L2Form {
    /// `Var(f) <= (2/ρ) e^{4ρ} Σ ‖L_i f‖²₂ / (1 + log(‖L_i f‖₂/‖L_i f‖₁))`.
    SemigroupForm,
    /// `‖f‖²₂ <= K log(2/(pq)) Σ ‖Δ_i f‖²₂ / log(e ‖Δ_i f‖₂/‖Δ_i f‖₁)` for
    /// mean-zero `f`.
    OriginalForm,
}

/// Default `K` of the original form: 14 at `p = 1/2`, 30 otherwise.
pub fn default_constant(p: f64) -> f64 {
    if (p - 0.5).abs() < 1e-12 {
        14.0
    } else {
        30.0
    }
}

/// `‖·‖₁`, `‖·‖₂` of a per-coordinate family and `log(l2/l1)` (0 when
/// `l2 = 0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinateNorms {
    pub l1: Vec<f64>,
    pub l2: Vec<f64>,
    pub ratio_log: Vec<f64>,
}

impl CoordinateNorms {
    fn from_tables(weights: &[f64], tables: &[Vec<f64>]) -> Self {
        let mut l1 = Vec::with_capacity(tables.len());
        let mut l2 = Vec::with_capacity(tables.len());
        let mut ratio_log = Vec::with_capacity(tables.len());
        for t in tables {
            let a: f64 = weights.iter().zip(t).map(|(w, v)| w * v.abs()).sum();
            let b: f64 = weights.iter().zip(t).map(|(w, v)| w * v * v).sum::<f64>().sqrt();
            if b == 0.0 {
                ratio_log.push(0.0);
            } else {
                debug_assert!(a > 0.0);
                ratio_log.push((b / a).ln().max(0.0));
            }
            l1.push(a);
            l2.push(b);
        }
        Self { l1, l2, ratio_log }
    }

    /// `Σ l2² / (1 + log(l2/l1))`, skipping coordinates with `l2 = 0`.
    pub fn weighted_energy(&self) -> f64 {
        self.l2
            .iter()
            .zip(&self.ratio_log)
            .filter(|(b, _)| **b > 0.0)
            .map(|(b, r)| b * b / (1.0 + r))
            .sum()
    }
}

/// Norms of `L_i f` for every coordinate.
pub fn coordinate_norms(f: &CubeFunction<'_>) -> Result<CoordinateNorms> {
    let cube = f.cube();
    let tables = (0..cube.n())
        .map(|i| coordinate_generator(f, i).map(|g| g.into_values()))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoordinateNorms::from_tables(cube.weights(), &tables))
}

/// `Δ_i f` from its `{0,1}^n` definition, with `+1 ↦ 1` and `-1 ↦ 0`:
/// `(1-p)(f(x) - f(U_i x))` when `x_i = 1`, `p (f(x) - f(U_i x))` when
/// `x_i = 0`.
pub fn delta_operator_bridge<'c>(
    f: &CubeFunction<'c>,
    i: usize,
) -> Result<FieldFunction<'c, ProductSpace>> {
    let cube = f.cube();
    if i >= cube.n() {
        return Err(crate::error::Error::IndexOutOfRange {
            index: i,
            len: cube.n(),
        });
    }
    let v = f.values();
    let space = cube.space();
    FieldFunction::from_fn(space, |x| {
        let ux = cube.flip(x, i);
        let bit_is_one = space.coord(x, i) == 1;
        let factor = if bit_is_one { cube.q() } else { cube.p() };
        factor * (v[x] - v[ux])
    })
}

/// `l1l2_bound` with the default constants.
pub fn l1l2_bound(f: &CubeFunction<'_>, form: L1L2Form) -> Result<VerificationReport> {
    l1l2_bound_with_constant(f, form, None)
}

/// `K` overrides the original-form constant; the semigroup form ignores it.
pub fn l1l2_bound_with_constant(
    f: &CubeFunction<'_>,
    form: L1L2Form,
    k: Option<f64>,
) -> Result<VerificationReport> {
    let cube = f.cube();
    let w = cube.weights();
    let lhs = variance_of(w, f.values());
    let report = match form {
        L1L2Form::SemigroupForm => {
            let rho = cube.rho();
            let norms = coordinate_norms(f)?;
            let rhs = 2.0 / rho * (4.0 * rho).exp() * norms.weighted_energy();
            VerificationReport::new("l1l2_semigroup_form", lhs, rhs, L1L2_TOL * (1.0 + rhs))
        }
        L1L2Form::OriginalForm => {
            let k = k.unwrap_or_else(|| default_constant(cube.p()));
            let tables = (0..cube.n())
                .map(|i| delta_operator_bridge(f, i).map(|g| g.values().to_vec()))
                .collect::<Result<Vec<_>>>()?;
            let norms = CoordinateNorms::from_tables(w, &tables);
            let rhs = k * (2.0 / (cube.p() * cube.q())).ln() * norms.weighted_energy();
            VerificationReport::new("l1l2_original_form", lhs, rhs, L1L2_TOL * (1.0 + rhs))
                .with_note(format!("K = {k}; f centred, mean {}", f.mean()))
        }
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::BiasedCube;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_is_trivial() {
        let c = BiasedCube::new(3, 0.3).unwrap();
        let f = CubeFunction::constant(&c, 5.0).unwrap();
        for form in [L1L2Form::SemigroupForm, L1L2Form::OriginalForm] {
            let r = l1l2_bound(&f, form).unwrap();
            assert_abs_diff_eq!(r.lhs, 0.0, epsilon = 1e-14);
            assert_eq!(r.rhs, 0.0);
            assert!(r.pass);
        }
    }

    #[test]
    fn coordinate_function_example() {
        for n in [1, 3, 6] {
            let c = BiasedCube::new(n, 0.5).unwrap();
            let x = CubeFunction::coordinate(&c, 0).unwrap();
            let norms = coordinate_norms(&x).unwrap();
            assert_abs_diff_eq!(norms.l1[0], 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(norms.l2[0], 1.0, epsilon = 1e-15);
            let r = l1l2_bound(&x, L1L2Form::SemigroupForm).unwrap();
            assert_abs_diff_eq!(r.lhs, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(r.rhs, 4.0 * 2f64.exp(), epsilon = 1e-12);
            assert_abs_diff_eq!(r.rhs, 29.556, epsilon = 1e-3);
        }
    }

    #[test]
    fn delta_is_minus_generator() {
        let c = BiasedCube::new(3, 0.2).unwrap();
        let f = CubeFunction::from_fn(&c, |k| (k as f64 * 0.9).sin() + 0.1 * k as f64).unwrap();
        for i in 0..3 {
            let d = delta_operator_bridge(&f, i).unwrap();
            let l = coordinate_generator(&f, i).unwrap();
            for (a, b) in d.values().iter().zip(l.values()) {
                assert_abs_diff_eq!(*a, -b, epsilon = 1e-12);
            }
        }
        let c1 = BiasedCube::new(1, 0.5).unwrap();
        let x = CubeFunction::coordinate(&c1, 0).unwrap();
        let d = delta_operator_bridge(&x, 0).unwrap();
        assert_eq!(d.values(), &[-1.0, 1.0]);
        assert!(delta_operator_bridge(&x, 1).is_err());
    }

    #[test]
    fn single_coordinate_reduces_to_poincare_shape() {
        let c = BiasedCube::new(4, 0.5).unwrap();
        let f = CubeFunction::from_signs(&c, |x| 2.0 + 3.0 * x[2]).unwrap();
        let norms = coordinate_norms(&f).unwrap();
        assert_abs_diff_eq!(norms.l1[2], norms.l2[2], epsilon = 1e-12);
        assert_abs_diff_eq!(norms.ratio_log[2], 0.0, epsilon = 1e-12);
        let r = l1l2_bound(&f, L1L2Form::SemigroupForm).unwrap();
        let energy = crate::cube::dirichlet_form(&f, &f, crate::cube::DirichletRepresentation::SumLi).unwrap();
        assert_abs_diff_eq!(r.rhs, 4.0 * 2f64.exp() * energy, epsilon = 1e-10);
    }

    #[test]
    fn single_coordinate_ratio_on_the_biased_cube() {
        // L_i f takes the values 6q and -6p, so l2/l1 = 1/(2√(pq)).
        let c = BiasedCube::new(2, 0.3).unwrap();
        let f = CubeFunction::from_signs(&c, |x| 2.0 + 3.0 * x[1]).unwrap();
        let norms = coordinate_norms(&f).unwrap();
        let pq: f64 = 0.3 * 0.7;
        assert_abs_diff_eq!(norms.l1[1], 12.0 * pq, epsilon = 1e-12);
        assert_abs_diff_eq!(norms.l2[1], 6.0 * pq.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(norms.ratio_log[1], -(2.0 * pq.sqrt()).ln(), epsilon = 1e-12);
    }

    #[test]
    fn default_constants() {
        assert_eq!(default_constant(0.5), 14.0);
        assert_eq!(default_constant(0.1), 30.0);
    }
}
