use approx::assert_abs_diff_eq;
use conclab::gauss::{
    fisher_lsi_check, gaussian_concentration_check, gaussian_lsi_check, herbst_mgf_check,
    ou_apply, ou_eval, QuadratureRule, SmoothTestFunction,
};
use conclab::rng::stream;
use rand_distr::{Distribution, StandardNormal};
use statrs::distribution::{ContinuousCDF, Normal};

fn rule() -> QuadratureRule {
    QuadratureRule::gauss_hermite(64).unwrap()
}

#[test]
fn lsi_for_identity_matches_closed_form_and_monte_carlo() {
    // E[X² log X²] = 2 − γ_E − log 2 for X standard normal.
    let euler = 0.577_215_664_901_532_9;
    let exact = 2.0 - euler - 2f64.ln();
    let rep = gaussian_lsi_check(&SmoothTestFunction::affine(0.0, 1.0), &rule()).unwrap();
    assert_abs_diff_eq!(rep.rhs, 2.0, epsilon = 1e-12);
    assert!(rep.pass);
    assert_abs_diff_eq!(rep.lhs, exact, epsilon = 5e-3);

    let mut rng = stream(5, 0);
    let n = 200_000;
    let draws: Vec<f64> = (0..n)
        .map(|_| {
            let x: f64 = StandardNormal.sample(&mut rng);
            let s = x * x;
            if s > 0.0 {
                s * s.ln()
            } else {
                0.0
            }
        })
        .collect();
    let mean = draws.iter().sum::<f64>() / n as f64;
    let var = draws.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let se = (var / n as f64).sqrt();
    assert!((mean - rep.lhs).abs() <= 4.0 * se, "mc {mean} quad {}", rep.lhs);
}

#[test]
fn ou_is_symmetric() {
    let r = QuadratureRule::gauss_hermite(128).unwrap();
    for s in 0..20 {
        let mut rng = stream(21, s);
        let f = SmoothTestFunction::random_lipschitz(&mut rng);
        let g = SmoothTestFunction::random_lipschitz(&mut rng);
        for t in [0.1, 0.7, 2.0] {
            let ptf = ou_apply(&f, t, &r).unwrap();
            let ptg = ou_apply(&g, t, &r).unwrap();
            let a = r.integrate_values(&r.nodes().iter().zip(&ptg).map(|(&x, v)| f.eval(x) * v).collect::<Vec<_>>());
            let b = r.integrate_values(&r.nodes().iter().zip(&ptf).map(|(&x, v)| g.eval(x) * v).collect::<Vec<_>>());
            assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        }
    }
}

#[test]
fn ou_gradient_contracts() {
    let r = rule();
    let h = 1e-4;
    for s in 0..20 {
        let mut rng = stream(22, s);
        let f = SmoothTestFunction::random_lipschitz(&mut rng);
        let absd = SmoothTestFunction::new("abs_derivative", {
            let f = f.clone();
            move |x| f.derivative(x).abs()
        }, |_| 0.0, f64::INFINITY);
        for t in [0.2, 1.0, 3.0] {
            for &x in r.nodes().iter().filter(|x| x.abs() < 6.0) {
                let grad = (ou_eval(&f, t, x + h, &r).unwrap() - ou_eval(&f, t, x - h, &r).unwrap()) / (2.0 * h);
                let bound = (-t as f64).exp() * ou_eval(&absd, t, x, &r).unwrap();
                assert!(grad.abs() <= bound + 1e-6, "t {t} x {x}: {grad} vs {bound}");
            }
        }
    }
}

#[test]
fn herbst_holds_for_seeded_lipschitz_functions() {
    let r = rule();
    let lambdas: Vec<f64> = (-12..=12).map(|k| 0.25 * k as f64).collect();
    for s in 0..200 {
        let f = SmoothTestFunction::random_lipschitz(&mut stream(23, s));
        for rep in herbst_mgf_check(&f, &lambdas, &r).unwrap() {
            assert!(rep.margin >= -1e-9, "{rep:?}");
        }
    }
}

#[test]
fn lsi_holds_for_seeded_functions() {
    let r = rule();
    for s in 0..200 {
        let mut rng = stream(24, s);
        let f = SmoothTestFunction::random_lipschitz(&mut rng);
        assert!(gaussian_lsi_check(&f, &r).unwrap().pass);
        let h = SmoothTestFunction::random_positive(&mut rng);
        let rep = fisher_lsi_check(&h, &r).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
}

#[test]
fn fisher_form_equality_for_exponential_tilts() {
    // h = e^{bx}: Ent_γ(h) = (b²/2)e^{b²/2} and ½∫h'²/h dγ = (b²/2)e^{b²/2}.
    let r = rule();
    for b in [0.3f64, 1.0, 1.7] {
        let h = SmoothTestFunction::exp_half(2.0 * b);
        let rep = fisher_lsi_check(&h, &r).unwrap();
        let want = 0.5 * b * b * (0.5 * b * b).exp();
        assert_abs_diff_eq!(rep.lhs, want, epsilon = 1e-9);
        assert_abs_diff_eq!(rep.rhs, want, epsilon = 1e-9);
    }
}

#[test]
fn concentration_for_identity_matches_normal_tail() {
    let normal = Normal::new(0.0, 1.0).unwrap();
    let f = SmoothTestFunction::affine(0.0, 1.0);
    let reps = gaussian_concentration_check(&f, &[1.0, 3.0], 200_000, 42, &rule()).unwrap();
    for (rep, r) in reps.iter().zip([1.0f64, 3.0]) {
        let tail = 1.0 - normal.cdf(r);
        assert!(rep.pass);
        assert_abs_diff_eq!(rep.rhs, (-r * r / 2.0).exp(), epsilon = 1e-15);
        let se = (tail * (1.0 - tail) / 200_000.0).sqrt();
        assert!((rep.lhs - tail).abs() <= 4.0 * se, "{} vs {tail}", rep.lhs);
    }
    assert_abs_diff_eq!(1.0 - normal.cdf(1.0), 0.15866, epsilon = 1e-5);
    assert_abs_diff_eq!(1.0 - normal.cdf(3.0), 0.00135, epsilon = 1e-5);
}

#[test]
fn concentration_holds_for_seeded_functions() {
    let r = rule();
    let grid: Vec<f64> = (0..=8).map(|k| 0.5 * k as f64).collect();
    for s in 0..10 {
        let f = SmoothTestFunction::random_lipschitz(&mut stream(25, s));
        for rep in gaussian_concentration_check(&f, &grid, 20_000, s, &r).unwrap() {
            assert!(rep.pass, "{rep:?}");
        }
    }
}
