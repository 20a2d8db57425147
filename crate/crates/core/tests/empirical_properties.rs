use conclab::empirical::{
    bernstein_tail_check, parse_instance, poisson_mgf_check, poisson_tail_check, random_instance,
    supremum_law, symmetrization_v_bound, talagrand_tail_check, truncation_level, truncation_split,
    write_instance, FamilyKind, LawMode, ProcessInstance,
};
use conclab::measure::{FiniteSpace, Measure};
use conclab::rng::stream;
use rand::Rng;

// Independent recursive enumeration: (z, w, probability) for every point.
fn brute_force(inst: &ProcessInstance) -> Vec<(f64, f64, f64)> {
    fn rec(inst: &ProcessInstance, i: usize, x: &mut Vec<usize>, p: f64, out: &mut Vec<(f64, f64, f64)>) {
        if i == inst.n() {
            let sums: Vec<(f64, f64)> = inst
                .family()
                .iter()
                .map(|g| {
                    let s: f64 = (0..inst.n()).map(|j| g[j][x[j]]).sum();
                    let q: f64 = (0..inst.n()).map(|j| g[j][x[j]].powi(2)).sum();
                    (s, q)
                })
                .collect();
            let z = sums.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
            let w = sums.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
            out.push((z, w, p));
            return;
        }
        for (s, &w) in inst.spaces()[i].weights().iter().enumerate() {
            x.push(s);
            rec(inst, i + 1, x, p * w, out);
            x.pop();
        }
    }
    let mut out = Vec::new();
    rec(inst, 0, &mut Vec::new(), 1.0, &mut out);
    out
}

const R_GRID: [f64; 9] = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0];

fn lambdas() -> Vec<f64> {
    (0..=16).map(|k| 0.25 * k as f64).collect()
}

#[test]
fn exact_law_matches_recursive_enumeration() {
    for seed in 0..100 {
        let mut rng = stream(21, seed);
        let n = rng.random_range(1..=6);
        let kind = [FamilyKind::Nonnegative, FamilyKind::Signed, FamilyKind::Symmetric][seed as usize % 3];
        let nf = rng.random_range(1..=5);
        let inst = random_instance(&mut rng, n, nf, 3, 1 << 10, kind).unwrap();
        let law = supremum_law(&inst, LawMode::Exact).unwrap();
        let rows = brute_force(&inst);
        let mean: f64 = rows.iter().map(|r| r.0 * r.2).sum();
        let v: f64 = rows.iter().map(|r| r.1 * r.2).sum();
        assert!((law.mean_z - mean).abs() < 1e-12, "seed {seed}");
        assert!((law.v - v).abs() < 1e-12);
        for r in R_GRID {
            let tail: f64 = rows.iter().filter(|x| (x.0 - mean).abs() >= r - 1e-9).map(|x| x.2).sum();
            let strict: f64 = rows.iter().filter(|x| (x.0 - mean).abs() >= r + 1e-9).map(|x| x.2).sum();
            let t = law.two_sided_tail(r);
            assert!(t <= tail + 1e-12 && t >= strict - 1e-12, "seed {seed} r {r}");
        }
        if inst.is_nonnegative() {
            for l in [0.5, 2.0, 4.0] {
                let mgf: f64 = rows.iter().map(|x| x.2 * (l * x.0).exp()).sum();
                assert!((law.log_mgf(l) - mgf.ln()).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn seeded_nonnegative_sweep_passes_every_bound() {
    let mut worst_mgf = f64::INFINITY;
    for seed in 0..200 {
        let mut rng = stream(22, seed);
        let n = rng.random_range(1..=10);
        let nf = rng.random_range(1..=8);
        let inst = random_instance(&mut rng, n, nf, 3, 1 << 12, FamilyKind::Nonnegative).unwrap();
        let law = supremum_law(&inst, LawMode::Exact).unwrap();
        for r in poisson_mgf_check(&law, &lambdas()).unwrap() {
            worst_mgf = worst_mgf.min(r.margin);
            assert!(r.margin >= -1e-10 * (1.0 + r.rhs.abs()), "seed {seed}: {r:?}");
        }
        for r in poisson_tail_check(&law, &R_GRID).unwrap()
            .into_iter()
            .chain(bernstein_tail_check(&law, &R_GRID).unwrap())
            .chain(talagrand_tail_check(&law, &R_GRID).unwrap())
        {
            assert!(r.pass, "seed {seed}: {r:?}");
        }
    }
    assert!(worst_mgf >= -1e-10);
}

#[test]
fn signed_families_pass_two_sided_bounds() {
    for seed in 0..200 {
        let mut rng = stream(23, seed);
        let n = rng.random_range(1..=10);
        let nf = rng.random_range(1..=8);
        let inst = random_instance(&mut rng, n, nf, 3, 1 << 12, FamilyKind::Signed).unwrap();
        let law = supremum_law(&inst, LawMode::Exact).unwrap();
        for r in bernstein_tail_check(&law, &R_GRID).unwrap().into_iter().chain(talagrand_tail_check(&law, &R_GRID).unwrap()) {
            assert!(r.pass, "seed {seed}: {r:?}");
        }
    }
}

#[test]
fn truncation_split_is_pointwise_valid() {
    for seed in 0..100 {
        let mut rng = stream(24, seed);
        let (n, nf) = (rng.random_range(1..=8), rng.random_range(1..=6));
        let inst = random_instance(&mut rng, n, nf, 3, 1 << 10, FamilyKind::Signed).unwrap();
        let law = supremum_law(&inst, LawMode::Exact).unwrap();
        let r = rng.random_range(0.1..6.0);
        let tau = if law.v > 0.0 { truncation_level(law.v, r).unwrap() } else { 0.5 };
        let split = truncation_split(&inst, tau).unwrap();
        assert!(split.max_excess <= 1e-12, "seed {seed}");
        // |g| 1{|g| > τ} ≤ g²/τ termwise
        assert!(split.mean_z2 <= law.v / tau + 1e-12);
        let p1: f64 = split.z1.iter().map(|a| a.1).sum();
        assert!((p1 - 1.0).abs() < 1e-12);
    }
}

#[test]
fn symmetrized_variance_bound_on_centred_families() {
    for seed in 0..100 {
        let mut rng = stream(25, seed);
        let (n, nf) = (rng.random_range(1..=8), 2 * rng.random_range(1..=4));
        let inst = random_instance(&mut rng, n, nf, 3, 1 << 10, FamilyKind::Symmetric).unwrap();
        let r = symmetrization_v_bound(&inst).unwrap();
        assert!(r.pass, "seed {seed}: {r:?}");
    }
}

#[test]
fn monte_carlo_agrees_with_exact_law() {
    for seed in 0..4 {
        let mut rng = stream(26, seed);
        let kind = if seed % 2 == 0 { FamilyKind::Nonnegative } else { FamilyKind::Signed };
        let inst = random_instance(&mut rng, 16, 6, 2, 1 << 16, kind).unwrap();
        let exact = supremum_law(&inst, LawMode::Exact).unwrap();
        let mc = supremum_law(&inst, LawMode::MonteCarlo { samples: 100_000, seed: 1000 + seed }).unwrap();
        let n = 100_000f64;
        assert!((mc.mean_z - exact.mean_z).abs() <= 3.0 * exact.sd_z / n.sqrt() + 1e-12, "seed {seed} mean");
        assert!((mc.v - exact.v).abs() <= 3.0 * exact.sd_w / n.sqrt() + 1e-12, "seed {seed} V");
        for r in R_GRID {
            // the two tails are centred at their own means; compare at the exact centre
            let p = exact.two_sided_tail(r);
            let se = (p * (1.0 - p) / n).sqrt();
            let shifted: f64 = mc
                .atoms
                .iter()
                .filter(|(z, _)| (z - exact.mean_z).abs() >= r - 1e-12 * (1.0 + r))
                .map(|a| a.1)
                .sum();
            assert!((shifted - p).abs() <= 4.0 * se + 1e-12, "seed {seed} r {r}: {shifted} vs {p}");
        }
        for rep in talagrand_tail_check(&mc, &R_GRID).unwrap() {
            assert!(rep.pass);
            assert!(rep.note.as_deref().unwrap().contains("statistical"));
        }
    }
}

#[test]
fn single_function_probes_are_close_to_tight() {
    // Binomial(20, 0.05) sits close to its Poisson limit.
    let space = FiniteSpace::from_weights(vec![0.95, 0.05]).unwrap();
    let inst = ProcessInstance::iid(space, 20, &[vec![0.0, 1.0]]).unwrap();
    let law = supremum_law(&inst, LawMode::Exact).unwrap();
    let r = &poisson_mgf_check(&law, &[1.0]).unwrap()[0];
    assert!(r.pass && r.lhs >= 0.95 * r.rhs, "{r:?}");
    let tail = &poisson_tail_check(&law, &[2.0]).unwrap()[0];
    assert!(tail.pass && tail.lhs >= 0.25 * tail.rhs, "{tail:?}");
}

#[test]
fn instance_files_round_trip() {
    let mut rng = stream(27, 0);
    let inst = random_instance(&mut rng, 5, 3, 4, 1 << 10, FamilyKind::Signed).unwrap();
    let text = write_instance(&inst);
    let back = parse_instance(&text).unwrap();
    assert_eq!(back.family(), inst.family());
    assert_eq!(write_instance(&back).lines().count(), text.lines().count());
    let a = supremum_law(&inst, LawMode::Exact).unwrap();
    let b = supremum_law(&back, LawMode::Exact).unwrap();
    assert!((a.mean_z - b.mean_z).abs() < 1e-14);
}
