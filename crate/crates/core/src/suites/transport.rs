use rand::Rng;

use super::{agreement, sweep, InstanceRecord, Suite, SuiteConfig, SuiteRun};
use crate::error::Result;
use crate::gauss::SmoothTestFunction;
use crate::report::VerificationReport;
use crate::rng::LabRng;
use crate::transport::{
    kantorovich_duality_gap, shift_density, t2_check, w2, DiscreteMeasure, DUAL_FEASIBILITY_TOL,
    GAP_TOL, MARGINAL_TOL, MAX_SUPPORT,
};

/// Direct solver instances ahead of the shift family.
const SOLVES: usize = 24;
const SHIFTS: [f64; 3] = [0.25, 0.5, 1.0];
const SHIFT_ORDERS: [usize; 3] = [16, 32, 64];
const SHIFT_REL_TOL: f64 = 0.02;
const MONOTONE_SLACK: f64 = 1e-10;
const T2_ORDER: usize = 64;

fn random_measure(rng: &mut LabRng, len: usize, dim: usize) -> Result<DiscreteMeasure> {
    let support = (0..len)
        .map(|_| (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect())
        .collect();
    let masses = (0..len).map(|_| rng.random_range(0.05..1.0)).collect();
    DiscreteMeasure::normalized(support, masses)
}

fn lattice(len: usize, offset: f64) -> Result<DiscreteMeasure> {
    let pts: Vec<f64> = (0..len).map(|k| k as f64 + offset).collect();
    DiscreteMeasure::uniform_on_line(&pts)
}

fn solve(cfg: &SuiteConfig, id: usize, max: usize) -> Result<InstanceRecord> {
    let mut rng = cfg.rng(Suite::Transport, id);
    let (mu, nu) = match id {
        0..=2 => (random_measure(&mut rng, max, id + 1)?, random_measure(&mut rng, max, id + 1)?),
        // uniform on two shifted lattices: every basis is degenerate
        3 => (lattice(max, 0.0)?, lattice(max, 0.5)?),
        _ => {
            let d = rng.random_range(1..=3);
            let (m, n) = (rng.random_range(1..=max), rng.random_range(1..=max));
            (random_measure(&mut rng, m, d)?, random_measure(&mut rng, n, d)?)
        }
    };
    let sol = w2(&mu, &nu)?;
    let scale = 1.0 + sol.cost.abs();
    let mut reports = vec![
        agreement("transport_marginals", sol.marginal_error, MARGINAL_TOL),
        agreement("transport_duality_gap", sol.gap, GAP_TOL * scale),
        agreement("transport_dual_feasibility", sol.dual_violation, DUAL_FEASIBILITY_TOL),
    ];
    if mu.len() * nu.len() <= 64 * 64 {
        let dual = kantorovich_duality_gap(&mu, &nu, &[])?;
        reports.push(VerificationReport::new("kantorovich_weak_duality", dual.best, dual.half_cost, 1e-9 * scale)
            .with_note(format!("ratio {}", dual.ratio)));
    }
    let label = format!("{}x{} d={} pivots={}", mu.len(), nu.len(), mu.dimension(), sol.pivots);
    Ok(InstanceRecord::new(id, label, reports))
}

fn shift(b: f64) -> Result<Vec<VerificationReport>> {
    let f = shift_density(b);
    let runs = SHIFT_ORDERS
        .iter()
        .map(|&m| t2_check(&f, m).map(|r| r.with_witness(format!("b={b} m={m}"))))
        .collect::<Result<Vec<_>>>()?;
    let exact = b * b;
    let top = runs.last().expect("orders are non-empty");
    let mut out = vec![
        VerificationReport::new("t2_shift_w2", (top.lhs - exact).abs() / exact, SHIFT_REL_TOL, 0.0),
        VerificationReport::new("t2_shift_entropy", (top.rhs - exact).abs() / exact, SHIFT_REL_TOL, 0.0),
    ];
    for w in runs.windows(2) {
        out.push(
            VerificationReport::new("t2_gap_refinement", w[1].margin, w[0].margin, MONOTONE_SLACK)
                .with_witness(format!("b={b} {} -> {}", w[0].witness.as_deref().unwrap_or(""), w[1].witness.as_deref().unwrap_or(""))),
        );
    }
    out.extend(runs);
    Ok(out)
}

fn density(cfg: &SuiteConfig, id: usize) -> Result<InstanceRecord> {
    let mut rng = cfg.rng(Suite::Transport, id);
    let g = SmoothTestFunction::random_positive(&mut rng);
    let r = t2_check(&|x| g.eval(x), T2_ORDER)?;
    Ok(InstanceRecord::new(id, g.name().to_string(), vec![r]))
}

pub(super) fn run(cfg: &SuiteConfig) -> Result<SuiteRun> {
    cfg.refuse_p(Suite::Transport)?;
    let max = cfg.n_within(Suite::Transport, 1, MAX_SUPPORT)?.unwrap_or(MAX_SUPPORT);
    let mut instances = sweep(SOLVES, |id| solve(cfg, id, max))?;
    for (k, &b) in SHIFTS.iter().enumerate() {
        instances.push(InstanceRecord::new(SOLVES + k, format!("shift b={b}"), shift(b)?));
    }
    let first = SOLVES + SHIFTS.len();
    instances.extend(sweep(cfg.count(Suite::Transport), |k| density(cfg, first + k))?);
    Ok(SuiteRun { suite: Suite::Transport, instances, probes: Vec::new() })
}
