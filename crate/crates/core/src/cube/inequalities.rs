use super::dynamics::{dirichlet_form, semigroup_apply, DirichletRepresentation};
use super::{BiasedCube, CubeFunction};
use crate::error::{Error, Result};
use crate::measure::{entropy_or_zero, variance_of};
use crate::report::VerificationReport;

/// Base slack for cube checks, scaled by the size of the compared quantities.
pub const CUBE_TOL: f64 = 1e-10;

fn scaled(lhs: f64, rhs: f64) -> f64 {
    CUBE_TOL * (1.0 + lhs.abs().max(rhs.abs()))
}

fn report(name: &str, lhs: f64, rhs: f64) -> VerificationReport {
    VerificationReport::new(name, lhs, rhs, scaled(lhs, rhs))
}

/// `Ent(f^2) <= (1/ρ) E(f, f)`.
pub fn lsi_check(f: &CubeFunction<'_>) -> Result<VerificationReport> {
    let cube = f.cube();
    let sq: Vec<f64> = f.values().iter().map(|v| v * v).collect();
    let lhs = entropy_or_zero(cube.weights(), &sq)?;
    let energy = dirichlet_form(f, f, DirichletRepresentation::Generator)?;
    Ok(report("cube_lsi", lhs, energy / cube.rho()))
}

/// `Var(f) <= E(f, f)`.
pub fn poincare_check(f: &CubeFunction<'_>) -> Result<VerificationReport> {
    let lhs = variance_of(f.cube().weights(), f.values());
    let rhs = dirichlet_form(f, f, DirichletRepresentation::Generator)?;
    Ok(report("cube_poincare", lhs, rhs))
}

fn check_exponents(p_norm: f64, q_norm: f64) -> Result<()> {
    if !(p_norm > 1.0 && q_norm > p_norm && q_norm.is_finite()) {
        return Err(Error::invalid(format!(
            "need 1 < p < q < ∞, got p = {p_norm}, q = {q_norm}"
        )));
    }
    Ok(())
}

/// Smallest `t` with `e^{4ρt} >= (q - 1)/(p - 1)`.
pub fn hypercontractive_time(cube: &BiasedCube, p_norm: f64, q_norm: f64) -> Result<f64> {
    check_exponents(p_norm, q_norm)?;
    Ok(((q_norm - 1.0) / (p_norm - 1.0)).ln() / (4.0 * cube.rho()))
}

/// `‖P_t f‖_q <= ‖f‖_p`, refused when `t` is below the hypercontractive time.
pub fn hypercontractivity_check(
    f: &CubeFunction<'_>,
    p_norm: f64,
    q_norm: f64,
    t: f64,
) -> Result<VerificationReport> {
    check_exponents(p_norm, q_norm)?;
    let ratio = (q_norm - 1.0) / (p_norm - 1.0);
    let reach = (4.0 * f.cube().rho() * t).exp();
    if !(reach >= ratio * (1.0 - 1e-12)) {
        return Err(Error::precondition_with(
            "time below the hypercontractive threshold",
            format!("e^(4ρt) = {reach}, (q-1)/(p-1) = {ratio}"),
        ));
    }
    hypercontractivity_probe(f, p_norm, q_norm, t)
}

/// Evaluates `‖P_t f‖_q <= ‖f‖_p` at any `t >= 0`, without the threshold
/// guard. Used to show that the check can fail.
pub fn hypercontractivity_probe(
    f: &CubeFunction<'_>,
    p_norm: f64,
    q_norm: f64,
    t: f64,
) -> Result<VerificationReport> {
    check_exponents(p_norm, q_norm)?;
    let lhs = semigroup_apply(f, t)?.norm(q_norm)?;
    let rhs = f.norm(p_norm)?;
    Ok(report("hypercontractivity", lhs, rhs)
        .with_note(format!("p = {p_norm}, q = {q_norm}, t = {t}")))
}

fn odd_pow(u: f64, a: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u.signum() * u.abs().powf(a)
    }
}

/// `(4(q-1)/q^2)(u^{q/2} - v^{q/2})^2 <= (u^{q-1} - v^{q-1})(u - v)`, with
/// powers extended to negative arguments as odd functions.
pub fn gross_convexity_check(u: f64, v: f64, q: f64) -> Result<VerificationReport> {
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::invalid(format!("exponent q = {q} must exceed 1")));
    }
    if !u.is_finite() || !v.is_finite() {
        return Err(Error::invalid("u and v must be finite"));
    }
    let c = 4.0 * (q - 1.0) / (q * q);
    let half = odd_pow(u, q / 2.0) - odd_pow(v, q / 2.0);
    let lhs = c * half * half;
    let rhs = (odd_pow(u, q - 1.0) - odd_pow(v, q - 1.0)) * (u - v);
    Ok(report("gross_convexity", lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn lsi_examples() {
        let c = BiasedCube::new(1, 0.5).unwrap();
        let f = CubeFunction::new(&c, vec![1.0, 0.0]).unwrap();
        let r = lsi_check(&f).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.5 * 2f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.rhs, 0.5, epsilon = 1e-12);
        assert!(r.pass);
        let k = CubeFunction::constant(&c, 3.0).unwrap();
        let r = lsi_check(&k).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.rhs, 0.0, epsilon = 1e-14);
        let z = CubeFunction::constant(&c, 0.0).unwrap();
        let r = lsi_check(&z).unwrap();
        assert!(r.pass && r.lhs == 0.0 && r.rhs == 0.0);
    }

    #[test]
    fn two_point_lsi_over_a_range_of_ratios() {
        for p in [0.1, 0.3, 0.5, 0.9] {
            let c = BiasedCube::new(1, p).unwrap();
            for a in [0.01, 0.2, 1.0, 5.0, 50.0] {
                let f = CubeFunction::new(&c, vec![1.0, a]).unwrap();
                assert!(lsi_check(&f).unwrap().pass);
            }
        }
    }

    #[test]
    fn poincare_equality_for_coordinate() {
        let c = BiasedCube::new(2, 0.5).unwrap();
        let x = CubeFunction::coordinate(&c, 0).unwrap();
        let r = poincare_check(&x).unwrap();
        assert_abs_diff_eq!(r.lhs, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.rhs, 1.0, epsilon = 1e-14);
        assert!(r.pass);
    }

    #[test]
    fn hypercontractivity_two_point_example() {
        let c = BiasedCube::new(1, 0.5).unwrap();
        let f = CubeFunction::from_signs(&c, |x| 1.0 + x[0]).unwrap();
        let t = 0.5 * 3f64.ln();
        assert_abs_diff_eq!(hypercontractive_time(&c, 2.0, 4.0).unwrap(), t, epsilon = 1e-14);
        let r = hypercontractivity_check(&f, 2.0, 4.0, t).unwrap();
        let a = 3f64.powf(-0.5);
        let want = ((((1.0 + a) as f64).powi(4) + (1.0 - a).powi(4)) / 2.0).powf(0.25);
        assert_abs_diff_eq!(r.lhs, want, epsilon = 1e-12);
        assert_abs_diff_eq!(r.lhs, 1.3281, epsilon = 1e-4);
        assert_abs_diff_eq!(r.rhs, 2f64.sqrt(), epsilon = 1e-14);
        assert!(r.pass);
    }

    #[test]
    fn below_threshold_is_a_precondition_error() {
        let c = BiasedCube::new(1, 0.5).unwrap();
        let f = CubeFunction::from_signs(&c, |x| 1.0 + x[0]).unwrap();
        let err = hypercontractivity_check(&f, 2.0, 4.0, 0.1).unwrap_err();
        assert!(matches!(err, Error::Precondition { .. }));
        let probe = hypercontractivity_probe(&f, 2.0, 4.0, 0.0).unwrap();
        assert!(!probe.pass);
        assert!(hypercontractivity_check(&f, 2.0, 1.5, 3.0).is_err());
    }

    #[test]
    fn constant_is_equality() {
        let c = BiasedCube::new(3, 0.3).unwrap();
        let k = CubeFunction::constant(&c, 2.0).unwrap();
        let t = hypercontractive_time(&c, 1.5, 3.0).unwrap();
        let r = hypercontractivity_check(&k, 1.5, 3.0, t).unwrap();
        assert_abs_diff_eq!(r.lhs, r.rhs, epsilon = 1e-13);
    }

    #[test]
    fn gross_examples() {
        let r = gross_convexity_check(2.0, 2.0, 3.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        let r = gross_convexity_check(1.3, 4.2, 2.0).unwrap();
        assert_abs_diff_eq!(r.lhs, r.rhs, epsilon = 1e-13);
        assert_abs_diff_eq!(r.rhs, 2.9f64 * 2.9, epsilon = 1e-13);
        assert!(gross_convexity_check(-1.0, 3.0, 5.0).unwrap().pass);
        assert!(gross_convexity_check(1.0, 1.0, 1.0).is_err());
    }
}
