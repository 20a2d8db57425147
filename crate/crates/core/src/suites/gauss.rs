use super::{agreement, sweep, InstanceRecord, Suite, SuiteConfig, SuiteRun};
use crate::error::Result;
use crate::gauss::{
    fisher_lsi_check, gaussian_concentration_check, gaussian_lsi_check, herbst_mgf_check,
    QuadratureRule, SmoothTestFunction, DEFAULT_ORDER, MAX_ORDER, MIN_LSI_ORDER,
};
use crate::report::VerificationReport;
use crate::rng::derive_seed;

const MOMENT_TOL: f64 = 1e-10;
const EQUALITY_TOL: f64 = 1e-8;
const MAX_MOMENT: u32 = 12;
const EXP_HALF_B: [f64; 3] = [0.5, 1.0, 2.0];
/// Random instances that also get a sampled concentration check.
const SAMPLED: usize = 8;
const DEFAULT_SAMPLES: usize = 20_000;

fn lambdas() -> Vec<f64> {
    (-6..=6).map(|k| 0.5 * k as f64).collect()
}

fn double_factorial(k: u32) -> f64 {
    (1..=k).rev().step_by(2).map(f64::from).product()
}

fn moments(rule: &QuadratureRule) -> Vec<VerificationReport> {
    (0..=MAX_MOMENT)
        .map(|k| {
            let exact = if k % 2 == 1 { 0.0 } else if k == 0 { 1.0 } else { double_factorial(k - 1) };
            let got = rule.integrate(|x| x.powi(k as i32));
            agreement("gh_moment", (got - exact) / exact.max(1.0), MOMENT_TOL)
                .with_witness(format!("k={k}"))
        })
        .collect()
}

fn lsi_equality(b: f64, rule: &QuadratureRule) -> Result<Vec<VerificationReport>> {
    let r = gaussian_lsi_check(&SmoothTestFunction::exp_half(b), rule)?;
    let gap = (r.rhs - r.lhs) / r.rhs.abs().max(1.0);
    Ok(vec![
        agreement("gaussian_lsi_equality", gap, EQUALITY_TOL).with_witness(format!("b={b}")),
        r,
    ])
}

fn herbst_equality(rule: &QuadratureRule) -> Result<Vec<VerificationReport>> {
    let reports = herbst_mgf_check(&SmoothTestFunction::affine(0.0, 1.0), &lambdas(), rule)?;
    let worst = reports
        .iter()
        .map(|r| (r.rhs - r.lhs).abs() / r.rhs)
        .fold(0.0, f64::max);
    let mut out = vec![agreement("herbst_equality", worst, EQUALITY_TOL).with_witness("F(x) = x")];
    out.extend(reports);
    Ok(out)
}

fn random(cfg: &SuiteConfig, id: usize, rule: &QuadratureRule) -> Result<InstanceRecord> {
    let mut rng = cfg.rng(Suite::Gauss, id);
    let f = SmoothTestFunction::random_lipschitz(&mut rng);
    let h = SmoothTestFunction::random_positive(&mut rng);
    let mut reports = herbst_mgf_check(&f, &lambdas(), rule)?;
    reports.push(gaussian_lsi_check(&f, rule)?);
    reports.push(fisher_lsi_check(&h, rule)?);
    if id < SAMPLED {
        let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
        let seed = derive_seed(cfg.seed, &format!("gauss-samples-{id}"));
        reports.extend(gaussian_concentration_check(&f, &[0.5, 1.0, 2.0, 3.0], samples, seed, rule)?);
    }
    Ok(InstanceRecord::new(id, format!("{} / {}", f.name(), h.name()), reports))
}

pub(super) fn run(cfg: &SuiteConfig) -> Result<SuiteRun> {
    cfg.refuse_p(Suite::Gauss)?;
    let order = cfg.n_within(Suite::Gauss, MIN_LSI_ORDER, MAX_ORDER)?.unwrap_or(DEFAULT_ORDER);
    let rule = QuadratureRule::gauss_hermite(order)?;
    let fixed = 2 + EXP_HALF_B.len();
    let mut instances = vec![InstanceRecord::new(0, format!("moments order={order}"), moments(&rule))];
    for (k, &b) in EXP_HALF_B.iter().enumerate() {
        instances.push(InstanceRecord::new(1 + k, format!("exp_half b={b}"), lsi_equality(b, &rule)?));
    }
    instances.push(InstanceRecord::new(fixed - 1, "identity", herbst_equality(&rule)?));
    let random = sweep(cfg.count(Suite::Gauss), |k| {
        random(cfg, k, &rule).map(|mut r| {
            r.id += fixed;
            r
        })
    })?;
    instances.extend(random);
    Ok(SuiteRun { suite: Suite::Gauss, instances, probes: Vec::new() })
}
