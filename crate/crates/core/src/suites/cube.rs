use rand::Rng;

use super::{agreement, sweep, InstanceRecord, Suite, SuiteConfig, SuiteRun, P_GRID};
use crate::cube::{
    dirichlet_form, hypercontractive_time, hypercontractivity_check, hypercontractivity_probe,
    lsi_check, poincare_check, BiasedCube, CubeFunction, DirichletRepresentation,
};
use crate::error::Result;
use crate::rng::LabRng;

const DIRICHLET_TOL: f64 = 1e-11;
/// Fraction of the hypercontractive time used by the violation probes.
const PROBE_FRACTION: f64 = 0.25;

struct Drawn {
    cube: BiasedCube,
    f: Vec<f64>,
    g: Vec<f64>,
    p_norm: f64,
    q_norm: f64,
}

fn draw(cfg: &SuiteConfig, id: usize, n: Option<usize>) -> Result<Drawn> {
    let mut rng: LabRng = cfg.rng(Suite::Cube, id);
    let n = n.unwrap_or_else(|| rng.random_range(1..=6));
    let p = cfg.p.unwrap_or(P_GRID[id % P_GRID.len()]);
    let cube = BiasedCube::new(n, p)?;
    let len = cube.len();
    let f: Vec<f64> = match id % 3 {
        0 => (0..len).map(|_| rng.random_range(-1.0..1.0)).collect(),
        1 => (0..len).map(|_| rng.random_range(0.0..2.0)).collect(),
        _ => (0..len).map(|_| if rng.random_bool(0.5) { 1.0 } else { 0.0 }).collect(),
    };
    let g = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
    let p_norm = rng.random_range(1.1..3.0);
    let q_norm = p_norm + rng.random_range(0.1..3.0);
    Ok(Drawn { cube, f, g, p_norm, q_norm })
}

fn label(d: &Drawn) -> String {
    format!("n={} p={}", d.cube.n(), d.cube.p())
}

fn instance(cfg: &SuiteConfig, id: usize, n: Option<usize>) -> Result<InstanceRecord> {
    let d = draw(cfg, id, n)?;
    let f = CubeFunction::new(&d.cube, d.f.clone())?;
    let g = CubeFunction::new(&d.cube, d.g.clone())?;
    let forms = DirichletRepresentation::ALL
        .iter()
        .map(|&r| dirichlet_form(&f, &g, r))
        .collect::<Result<Vec<f64>>>()?;
    let spread = forms.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
        - forms.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let t = hypercontractive_time(&d.cube, d.p_norm, d.q_norm)?;
    let reports = vec![
        agreement("dirichlet_agreement", spread, DIRICHLET_TOL)
            .with_note(format!("E(f,g) = {}", forms[0])),
        lsi_check(&f)?,
        poincare_check(&f)?,
        hypercontractivity_check(&f, d.p_norm, d.q_norm, t)?,
    ];
    Ok(InstanceRecord::new(id, label(&d), reports))
}

fn probe(cfg: &SuiteConfig, id: usize, n: Option<usize>) -> Result<InstanceRecord> {
    let d = draw(cfg, id, n)?;
    let f = CubeFunction::new(&d.cube, d.f.clone())?;
    let t = hypercontractive_time(&d.cube, d.p_norm, d.q_norm)?;
    let r = hypercontractivity_probe(&f, d.p_norm, d.q_norm, PROBE_FRACTION * t)?
        .with_note("below threshold");
    Ok(InstanceRecord::new(id, label(&d), vec![r]))
}

pub(super) fn run(cfg: &SuiteConfig) -> Result<SuiteRun> {
    let n = cfg.n_within(Suite::Cube, 1, 12)?;
    let count = cfg.count(Suite::Cube);
    Ok(SuiteRun {
        suite: Suite::Cube,
        instances: sweep(count, |id| instance(cfg, id, n))?,
        probes: sweep(count.min(100), |id| probe(cfg, id, n))?,
    })
}
