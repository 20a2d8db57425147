use rand::Rng;

use super::{agreement, sweep, InstanceRecord, Suite, SuiteConfig, SuiteRun};
use crate::convex::{
    convex_distance_moment, distance_profile, intermediate_bounds, square_lipschitz_check,
    MomentConstant, PatternSet,
};
use crate::error::Result;
use crate::measure::{FiniteSpace, Measure, ProductSpace};
use crate::report::VerificationReport;

const IDENTITY_TOL: f64 = 1e-8;

fn instance(cfg: &SuiteConfig, id: usize, n: Option<usize>) -> Result<InstanceRecord> {
    let mut rng = cfg.rng(Suite::Convex, id);
    let n = n.unwrap_or_else(|| rng.random_range(1..=8));
    let factor = match cfg.p {
        Some(p) => FiniteSpace::from_weights(vec![1.0 - p, p])?,
        None => FiniteSpace::uniform(2)?,
    };
    let base = ProductSpace::power(factor, n)?;
    let density = rng.random_range(0.05..0.9);
    let mut members: Vec<usize> = (0..base.len()).filter(|_| rng.random_bool(density)).collect();
    if members.is_empty() {
        members.push(rng.random_range(0..base.len()));
    }
    let a = PatternSet::new(base, members)?;
    let prof = distance_profile(&a)?;
    let mut reports = vec![
        agreement("convex_identity", prof.identity_error(), IDENTITY_TOL),
        VerificationReport::new("minnorm_certificate", f64::from(u8::from(!prof.certificates_ok)), 0.0, 0.0)
            .with_note(format!("smallest certificate {}", prof.min_certificate)),
        convex_distance_moment(&a, &prof, MomentConstant::Quarter),
        convex_distance_moment(&a, &prof, MomentConstant::Fourteenth),
    ];
    reports.extend(intermediate_bounds(&a, &prof));
    reports.push(square_lipschitz_check(&a, &prof));
    let label = format!("n={n} |A|={} density={density:.3}", a.members().len());
    Ok(InstanceRecord::new(id, label, reports))
}

pub(super) fn run(cfg: &SuiteConfig) -> Result<SuiteRun> {
    let n = cfg.n_within(Suite::Convex, 1, 10)?;
    Ok(SuiteRun {
        suite: Suite::Convex,
        instances: sweep(cfg.count(Suite::Convex), |id| instance(cfg, id, n))?,
        probes: Vec::new(),
    })
}
