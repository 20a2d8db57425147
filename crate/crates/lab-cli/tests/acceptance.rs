//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines always reach the output; exits nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use conclab::cube::{semigroup_apply, BiasedCube, CubeFunction};
use conclab::gauss::QuadratureRule;
use conclab::rng::stream;
use conclab::suites::{run_suite, Suite, SuiteConfig, SuiteRun};
use rand::Rng;

const SEED: u64 = 42;

struct Verdict {
    criterion: u32,
    title: &'static str,
    failures: Vec<String>,
    detail: String,
}

impl Verdict {
    fn new(criterion: u32, title: &'static str) -> Self {
        Self { criterion, title, failures: Vec::new(), detail: String::new() }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn print(&self) {
        let status = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {} [{}]: {status} ({})", self.criterion, self.title, self.detail);
        for f in &self.failures {
            println!("    {f}");
        }
    }
}

fn timed(suite: Suite) -> (SuiteRun, Duration) {
    let start = Instant::now();
    let run = run_suite(suite, &SuiteConfig::seeded(SEED)).expect("suite runs");
    (run, start.elapsed())
}

/// Checks that every report named `prefix*` passes and that there are at
/// least `at_least` of them.
fn all_pass(v: &mut Verdict, run: &SuiteRun, prefix: &str, at_least: usize) {
    let reps: Vec<_> = run.named(prefix).collect();
    let bad = reps.iter().filter(|r| !r.pass).count();
    v.require(reps.len() >= at_least, format!("{prefix}: {} reports, expected >= {at_least}", reps.len()));
    v.require(bad == 0, format!("{prefix}: {bad} of {} failed", reps.len()));
}

fn worst_margin(run: &SuiteRun, prefix: &str) -> f64 {
    run.named(prefix).map(|r| r.margin).fold(f64::INFINITY, f64::min)
}

fn worst_lhs(run: &SuiteRun, prefix: &str) -> f64 {
    run.named(prefix).map(|r| r.lhs).fold(0.0, f64::max)
}

fn criterion_1() -> Verdict {
    let mut v = Verdict::new(1, "entropy tensorization");
    let (run, t) = timed(Suite::Entropy);
    v.require(run.instances.len() >= 10_000, "fewer than 10^4 instances");
    for name in [
        "tensorization_entropy",
        "tensorization_efron_stein",
        "tensorization_symmetrized",
        "tensorization_variational",
    ] {
        v.require(run.named(name).count() >= 10_000, format!("{name}: missing instances"));
        let m = worst_margin(&run, name);
        v.require(m >= -1e-10, format!("{name}: worst margin {m:e}"));
    }
    let points = run
        .instances
        .iter()
        .map(|r| {
            let sizes = r.label.split(['[', ']']).nth(1).unwrap_or("");
            sizes.split(',').map(|s| s.trim().parse::<usize>().unwrap_or(0)).product::<usize>()
        })
        .max()
        .unwrap_or(0);
    v.require(points <= 1 << 10, format!("largest space has {points} points"));
    let gap = worst_lhs(&run, "entropy_duality_gap");
    v.require(gap <= 1e-9, format!("duality gap {gap:e}"));
    all_pass(&mut v, &run, "entropy_duality_gap", 5_000);
    v.require(t <= Duration::from_secs(120), format!("runtime {t:?}"));
    v.detail = format!(
        "{} instances, worst margin {:e}, largest space {points}, duality gap {gap:e}, {:.1} s",
        run.instances.len(),
        run.min_margin(),
        t.as_secs_f64()
    );
    v
}

/// `Σ_k (tL)^k f / k!` with `L` assembled from the conditional means.
fn series_semigroup(cube: &BiasedCube, f: &[f64], t: f64) -> Vec<f64> {
    let w = cube.weights();
    let apply_l = |h: &[f64]| -> Vec<f64> {
        (0..h.len())
            .map(|x| {
                (0..cube.n())
                    .map(|i| {
                        let y = cube.flip(x, i);
                        (w[x] * h[x] + w[y] * h[y]) / (w[x] + w[y]) - h[x]
                    })
                    .sum()
            })
            .collect()
    };
    let mut term = f.to_vec();
    let mut total = f.to_vec();
    for k in 1..=120 {
        term = apply_l(&term).into_iter().map(|v| v * t / k as f64).collect();
        for (a, b) in total.iter_mut().zip(&term) {
            *a += b;
        }
    }
    total
}

fn criterion_2() -> Verdict {
    let mut v = Verdict::new(2, "cube dynamics");
    let (run, t) = timed(Suite::Cube);
    v.require(run.instances.len() >= 10_000, "fewer than 10^4 instances");
    for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let tag = format!("p={p}");
        v.require(run.instances.iter().any(|r| r.label.ends_with(&tag)), format!("no instance at {tag}"));
    }
    v.require(
        run.instances.iter().all(|r| {
            let n: usize = r.label.split_whitespace().next().unwrap()[2..].parse().unwrap();
            n <= 6
        }),
        "dimension above 6",
    );
    all_pass(&mut v, &run, "dirichlet_agreement", 10_000);
    let spread = worst_lhs(&run, "dirichlet_agreement");
    v.require(spread <= 1e-11, format!("Dirichlet spread {spread:e}"));
    all_pass(&mut v, &run, "cube_lsi", 10_000);
    all_pass(&mut v, &run, "hypercontractivity", 10_000);

    let mut series_err = 0.0f64;
    for s in 0..300u64 {
        let mut rng = stream(SEED, 20_000 + s);
        let n = rng.random_range(1..=3);
        let p = [0.1, 0.3, 0.5, 0.7, 0.9][s as usize % 5];
        let cube = BiasedCube::new(n, p).unwrap();
        let f: Vec<f64> = (0..cube.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let time = rng.random_range(0.0..=2.0);
        let fast = semigroup_apply(&CubeFunction::new(&cube, f.clone()).unwrap(), time).unwrap();
        let slow = series_semigroup(&cube, &f, time);
        for (a, b) in fast.values().iter().zip(&slow) {
            series_err = series_err.max((a - b).abs());
        }
    }
    v.require(series_err <= 1e-9, format!("semigroup vs series {series_err:e}"));
    let probes = run.probe_failures();
    v.require(probes >= 1, "sub-threshold harness found no violation");
    v.require(t <= Duration::from_secs(180), format!("runtime {t:?}"));
    v.detail = format!(
        "{} instances, Dirichlet spread {spread:e}, series error {series_err:e}, {probes}/{} probes violated, {:.1} s",
        run.instances.len(),
        run.probes.len(),
        t.as_secs_f64()
    );
    v
}

fn criterion_3() -> Verdict {
    let mut v = Verdict::new(3, "gaussian quadrature and Herbst");
    let (run, _) = timed(Suite::Gauss);
    // moments through order 12 straight from the rule, against (k-1)!!
    let rule = QuadratureRule::gauss_hermite(64).unwrap();
    let mut exact = 1.0;
    let mut worst = 0.0f64;
    for k in (0..=12).step_by(2) {
        if k > 0 {
            exact *= (k - 1) as f64;
        }
        let got = rule.integrate(|x| x.powi(k));
        let odd = rule.integrate(|x| x.powi(k + 1));
        worst = worst.max((got - exact).abs() / exact).max(odd.abs());
    }
    v.require(worst <= 1e-10, format!("moment error {worst:e}"));
    all_pass(&mut v, &run, "gh_moment", 13);
    all_pass(&mut v, &run, "gaussian_lsi_equality", 3);
    let lsi_eq = worst_lhs(&run, "gaussian_lsi_equality");
    v.require(lsi_eq <= 1e-8, format!("LSI equality gap {lsi_eq:e}"));
    for b in ["b=0.5", "b=1", "b=2"] {
        v.require(
            run.named("gaussian_lsi_equality").any(|r| r.witness.as_deref() == Some(b)),
            format!("no equality case for {b}"),
        );
    }
    let herbst: Vec<_> = run
        .instances
        .iter()
        .filter(|r| r.label != "identity" && r.reports.iter().any(|x| x.name == "herbst_mgf"))
        .collect();
    v.require(herbst.len() >= 1_000, format!("{} Lipschitz functions", herbst.len()));
    for lam in ["lambda=-3", "lambda=3"] {
        v.require(run.named("herbst_mgf").any(|r| r.witness.as_deref().is_some_and(|w| w.ends_with(lam))), format!("grid misses {lam}"));
    }
    all_pass(&mut v, &run, "herbst_mgf", 13_000);
    all_pass(&mut v, &run, "herbst_equality", 1);
    let mgf_eq = worst_lhs(&run, "herbst_equality");
    v.require(mgf_eq <= 1e-8, format!("MGF equality gap {mgf_eq:e}"));
    v.require(run.failures() == 0, format!("{} reports failed", run.failures()));
    v.detail = format!(
        "moment error {worst:e}, LSI equality {lsi_eq:e}, {} Herbst functions, MGF equality {mgf_eq:e}",
        herbst.len()
    );
    v
}

fn criterion_4() -> Verdict {
    let mut v = Verdict::new(4, "convex distance");
    let (run, t) = timed(Suite::Convex);
    v.require(run.instances.len() >= 1_000, "fewer than 10^3 sets");
    let identity = worst_lhs(&run, "convex_identity");
    v.require(identity <= 1e-8, format!("identity error {identity:e}"));
    for name in [
        "convex_identity",
        "minnorm_certificate",
        "convex_moment_1/4",
        "convex_moment_1/14",
        "convex_intermediate_m2",
        "convex_intermediate_pa",
        "convex_square_lipschitz",
    ] {
        all_pass(&mut v, &run, name, 1_000);
    }
    let sq = run.named("convex_square_lipschitz").map(|r| r.lhs).fold(f64::NEG_INFINITY, f64::max);
    v.require(sq <= 1.0 + 1e-8, format!("square-Lipschitz max {sq}"));
    v.require(t <= Duration::from_secs(600), format!("runtime {t:?}"));
    v.detail = format!(
        "{} sets, identity error {identity:e}, square-Lipschitz max {sq:.12}, {:.1} s",
        run.instances.len(),
        t.as_secs_f64()
    );
    v
}

fn criterion_5() -> Verdict {
    let mut v = Verdict::new(5, "L1-L2 and influences");
    let (run, _) = timed(Suite::L1l2);
    all_pass(&mut v, &run, "l1l2_semigroup", 10_000);
    all_pass(&mut v, &run, "l1l2_original", 10_000);
    all_pass(&mut v, &run, "kkl_summed", 20);
    all_pass(&mut v, &run, "kkl_max_influence", 20);
    for family in ["dictator", "parity", "monotone"] {
        v.require(run.instances.iter().any(|r| r.label.starts_with(family)), format!("no {family} sets"));
    }
    for n in [3, 5, 7, 9] {
        let tag = format!("majority n={n}");
        v.require(run.instances.iter().any(|r| r.label == tag), format!("missing {tag}"));
    }
    let kkl = run.named("kkl_summed").count();
    v.detail = format!(
        "{} functions, {kkl} influence sets, worst margin {:e}",
        run.named("l1l2_semigroup").count(),
        run.min_margin()
    );
    v
}

fn criterion_6() -> Verdict {
    let mut v = Verdict::new(6, "transport");
    let (run, _) = timed(Suite::Transport);
    all_pass(&mut v, &run, "transport_marginals", 20);
    all_pass(&mut v, &run, "transport_duality_gap", 20);
    all_pass(&mut v, &run, "transport_dual_feasibility", 20);
    v.require(run.instances.iter().any(|r| r.label.starts_with("256x256")), "no 256x256 solve");
    let marg = worst_lhs(&run, "transport_marginals");
    v.require(marg <= 1e-10, format!("marginal error {marg:e}"));
    // shift-family runs carry a witness; the random densities do not
    let densities: Vec<_> = run.named("t2_transport").filter(|r| r.witness.is_none()).collect();
    v.require(densities.len() >= 1_000, format!("{} T2 densities", densities.len()));
    let t2 = densities.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    v.require(t2 >= -1e-6, format!("T2 worst margin {t2:e}"));
    all_pass(&mut v, &run, "t2_shift_w2", 3);
    all_pass(&mut v, &run, "t2_shift_entropy", 3);
    all_pass(&mut v, &run, "t2_gap_refinement", 6);
    let shift = worst_lhs(&run, "t2_shift_w2");
    v.require(shift <= 0.02, format!("shift relative error {shift}"));
    v.detail = format!(
        "{} solves certified, {} densities with worst margin {t2:e}, shift error {shift:e}",
        run.named("transport_marginals").count(),
        densities.len()
    );
    v
}

fn criterion_7() -> Verdict {
    let mut v = Verdict::new(7, "empirical process suprema");
    let (run, t) = timed(Suite::Empirical);
    let nonneg: Vec<_> = run.instances.iter().filter(|r| r.label.starts_with("nonnegative")).collect();
    v.require(nonneg.len() >= 1_000, format!("{} nonnegative instances", nonneg.len()));
    v.require(
        nonneg.iter().all(|r| {
            let mut f = r.label.split_whitespace().skip(1);
            let n: usize = f.next().unwrap()[2..].parse().unwrap();
            let big: usize = f.next().unwrap()[2..].parse().unwrap();
            n <= 10 && big <= 8
        }),
        "instance outside n <= 10, N <= 8",
    );
    let mgf: Vec<_> = nonneg.iter().flat_map(|r| &r.reports).filter(|r| r.name == "poisson_mgf").collect();
    v.require(mgf.len() >= 17_000, format!("{} MGF checks", mgf.len()));
    v.require(mgf.iter().all(|r| r.pass), "Poisson MGF failure");
    for name in ["poisson_mgf", "poisson_tail", "bernstein_tail", "talagrand_tail"] {
        all_pass(&mut v, &run, name, 1_000);
    }
    for name in ["mc_mean_agreement", "mc_v_agreement", "mc_tail_agreement"] {
        all_pass(&mut v, &run, name, 4);
    }
    let stat = run.named("talagrand_tail").filter(|r| r.note.as_deref().is_some_and(|n| n.contains("100000 samples"))).count();
    v.require(stat > 0, "no Monte Carlo run at 10^5 samples");
    v.require(t <= Duration::from_secs(600), format!("runtime {t:?}"));
    v.detail = format!(
        "{} exact instances, {} MGF checks, {} sampled tail checks, {:.1} s",
        nonneg.len(),
        mgf.len(),
        stat,
        t.as_secs_f64()
    );
    v
}

fn criterion_8() -> Verdict {
    let mut v = Verdict::new(8, "end to end");
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_lab"))
            .args(["all", "--seed", "42"])
            .env("LAB_THREADS", threads)
            .output()
            .expect("lab runs")
    };
    let first = run("4");
    let second = run("1");
    v.require(first.status.code() == Some(0), format!("exit status {:?}", first.status.code()));
    let parsed: Result<serde_json::Value, _> = serde_json::from_slice(&first.stdout);
    match &parsed {
        Ok(j) => {
            v.require(j["schema"] == 1, "schema field is not 1");
            v.require(j["failures"] == 0, format!("failures = {}", j["failures"]));
            v.require(j["suites"].as_array().map_or(0, |a| a.len()) == 7, "not all suites present");
        }
        Err(e) => v.require(false, format!("stdout is not JSON: {e}")),
    }
    v.require(first.stdout == second.stdout, "rerun differs");
    v.detail = format!(
        "exit {:?}, {} bytes, rerun on another thread count {}",
        first.status.code(),
        first.stdout.len(),
        if first.stdout == second.stdout { "identical" } else { "different" }
    );
    v
}

fn main() {
    let verdicts = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ];
    for v in &verdicts {
        v.print();
    }
    let failed: Vec<_> = verdicts.iter().filter(|v| !v.failures.is_empty()).map(|v| v.criterion).collect();
    if !failed.is_empty() {
        println!("criteria failed: {failed:?}");
        std::process::exit(1);
    }
    println!("all 8 criteria pass");
}
