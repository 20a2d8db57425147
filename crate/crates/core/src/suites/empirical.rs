use rand::Rng;

use super::{sweep, InstanceRecord, Suite, SuiteConfig, SuiteRun};
use crate::empirical::{
    bernstein_tail_check, poisson_mgf_check, poisson_tail_check, random_instance, supremum_law,
    symmetrization_v_bound, talagrand_tail_check, FamilyKind, LawMode, ProcessInstance,
    SupremumLaw,
};
use crate::error::Result;
use crate::measure::FiniteSpace;
use crate::report::VerificationReport;
use crate::rng::{derive_seed, LabRng};

pub const R_GRID: [f64; 9] = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0];
const EXACT_POINTS: usize = 1 << 12;
/// Exact-versus-sampled comparisons, then sampled-only runs.
const AGREEMENT_INSTANCES: usize = 4;
const AGREEMENT_N: usize = 18;
const LARGE_INSTANCES: usize = 2;
const LARGE_N: usize = 40;
const SIGNED: usize = 200;
const SYMMETRIC: usize = 50;
const DEFAULT_SAMPLES: usize = 100_000;
const SIGMAS: f64 = 4.0;

pub fn lambdas() -> Vec<f64> {
    (0..=16).map(|k| 0.25 * k as f64).collect()
}

fn draw(
    cfg: &SuiteConfig,
    rng: &mut LabRng,
    n: usize,
    size: usize,
    support: usize,
    budget: usize,
    kind: FamilyKind,
) -> Result<ProcessInstance> {
    match cfg.p {
        None => random_instance(rng, n, size, support, budget, kind),
        Some(p) => {
            let inst = random_instance(rng, n, size, 2, budget, kind)?;
            let space = FiniteSpace::from_weights(vec![1.0 - p, p])?;
            ProcessInstance::new(vec![space; n], inst.family().to_vec())
        }
    }
}

fn exact_reports(law: &SupremumLaw, with_mgf: bool) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    if with_mgf {
        out.extend(poisson_mgf_check(law, &lambdas())?);
        out.extend(poisson_tail_check(law, &R_GRID)?);
    }
    out.extend(bernstein_tail_check(law, &R_GRID)?);
    out.extend(talagrand_tail_check(law, &R_GRID)?);
    Ok(out)
}

fn label(inst: &ProcessInstance, kind: &str) -> String {
    format!("{kind} n={} N={} points={}", inst.n(), inst.family_size(), inst.points())
}

fn nonnegative(cfg: &SuiteConfig, id: usize, n: Option<usize>) -> Result<InstanceRecord> {
    let mut rng = cfg.rng(Suite::Empirical, id);
    let n = n.unwrap_or_else(|| rng.random_range(1..=10));
    let size = rng.random_range(1..=8);
    let inst = draw(cfg, &mut rng, n, size, 3, EXACT_POINTS, FamilyKind::Nonnegative)?;
    let law = supremum_law(&inst, LawMode::Exact)?;
    Ok(InstanceRecord::new(id, label(&inst, "nonnegative"), exact_reports(&law, true)?))
}

fn signed(cfg: &SuiteConfig, id: usize, n: Option<usize>) -> Result<InstanceRecord> {
    let mut rng = cfg.rng(Suite::Empirical, id);
    let n = n.unwrap_or_else(|| rng.random_range(1..=10));
    let size = rng.random_range(1..=8);
    let inst = draw(cfg, &mut rng, n, size, 3, EXACT_POINTS, FamilyKind::Signed)?;
    let law = supremum_law(&inst, LawMode::Exact)?;
    Ok(InstanceRecord::new(id, label(&inst, "signed"), exact_reports(&law, false)?))
}

fn symmetric(cfg: &SuiteConfig, id: usize, n: Option<usize>) -> Result<InstanceRecord> {
    let mut rng = cfg.rng(Suite::Empirical, id);
    let n = n.unwrap_or_else(|| rng.random_range(1..=8));
    let size = 2 * rng.random_range(1..=4);
    let inst = draw(cfg, &mut rng, n, size, 3, EXACT_POINTS, FamilyKind::Symmetric)?;
    Ok(InstanceRecord::new(id, label(&inst, "symmetric"), vec![symmetrization_v_bound(&inst)?]))
}

fn within(name: &str, diff: f64, se: f64) -> VerificationReport {
    VerificationReport::new(name, diff.abs(), SIGMAS * se, 1e-12)
}

fn agreement(cfg: &SuiteConfig, id: usize, samples: usize) -> Result<InstanceRecord> {
    let mut rng = cfg.rng(Suite::Empirical, id);
    let kind = if id % 2 == 0 { FamilyKind::Nonnegative } else { FamilyKind::Signed };
    let inst = draw(cfg, &mut rng, AGREEMENT_N, 6, 2, 1 << AGREEMENT_N, kind)?;
    let exact = supremum_law(&inst, LawMode::Exact)?;
    let seed = derive_seed(cfg.seed, &format!("empirical-mc-{id}"));
    let mc = supremum_law(&inst, LawMode::MonteCarlo { samples, seed })?;
    let root = (samples as f64).sqrt();
    let mut reports = vec![
        within("mc_mean_agreement", mc.mean_z - exact.mean_z, exact.sd_z / root),
        within("mc_v_agreement", mc.v - exact.v, exact.sd_w / root),
    ];
    for r in R_GRID {
        // both tails are taken around the exact mean
        let p = exact.two_sided_tail(r);
        let hat: f64 = mc
            .atoms
            .iter()
            .filter(|(z, _)| (z - exact.mean_z).abs() >= r - 1e-12 * (1.0 + r))
            .map(|a| a.1)
            .sum();
        reports.push(
            within("mc_tail_agreement", hat - p, (p * (1.0 - p)).sqrt() / root)
                .with_witness(format!("r={r}")),
        );
    }
    reports.extend(talagrand_tail_check(&mc, &R_GRID)?);
    Ok(InstanceRecord::new(id, label(&inst, "agreement"), reports))
}

fn large(cfg: &SuiteConfig, id: usize, samples: usize) -> Result<InstanceRecord> {
    let mut rng = cfg.rng(Suite::Empirical, id);
    let inst = draw(cfg, &mut rng, LARGE_N, 8, 2, usize::MAX, FamilyKind::Signed)?;
    let seed = derive_seed(cfg.seed, &format!("empirical-mc-{id}"));
    let mc = supremum_law(&inst, LawMode::MonteCarlo { samples, seed })?;
    let mut reports = bernstein_tail_check(&mc, &R_GRID)?;
    reports.extend(talagrand_tail_check(&mc, &R_GRID)?);
    Ok(InstanceRecord::new(id, label(&inst, "sampled"), reports))
}

pub(super) fn run(cfg: &SuiteConfig) -> Result<SuiteRun> {
    let n = cfg.n_within(Suite::Empirical, 1, 12)?;
    let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
    let count = cfg.count(Suite::Empirical);
    let mut instances = sweep(count, |id| nonnegative(cfg, id, n))?;
    let mut next = count;
    instances.extend(sweep(AGREEMENT_INSTANCES, |k| agreement(cfg, next + k, samples))?);
    next += AGREEMENT_INSTANCES;
    instances.extend(sweep(LARGE_INSTANCES, |k| large(cfg, next + k, samples))?);
    next += LARGE_INSTANCES;
    instances.extend(sweep(SIGNED, |k| signed(cfg, next + k, n))?);
    next += SIGNED;
    instances.extend(sweep(SYMMETRIC, |k| symmetric(cfg, next + k, n))?);
    Ok(SuiteRun { suite: Suite::Empirical, instances, probes: Vec::new() })
}
