use conclab::measure::{
    entropic_bound, entropy, entropy_duality_gap, tensorization_bound, tensorization_rhs,
    variational_entropy, FieldFunction, FiniteSpace, ProductSpace, TensorizationVariant,
};
use proptest::prelude::*;

fn finite_space(max: usize) -> impl Strategy<Value = FiniteSpace> {
    prop::collection::vec(0.01f64..1.0, 1..=max).prop_map(|w| {
        let s: f64 = w.iter().sum();
        FiniteSpace::from_weights(w.into_iter().map(|x| x / s).collect()).unwrap()
    })
}

fn product_space() -> impl Strategy<Value = ProductSpace> {
    prop::collection::vec(finite_space(3), 1..=4).prop_map(|f| ProductSpace::new(f).unwrap())
}

fn with_values<S: Clone + std::fmt::Debug>(
    space: impl Strategy<Value = S>,
    len: fn(&S) -> usize,
    lo: f64,
) -> impl Strategy<Value = (S, Vec<f64>)> {
    space.prop_flat_map(move |s| {
        let n = len(&s);
        (Just(s), prop::collection::vec(lo..5.0, n))
    })
}

fn plen(s: &ProductSpace) -> usize {
    conclab::measure::Measure::len(s)
}

fn flen(s: &FiniteSpace) -> usize {
    conclab::measure::Measure::len(s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn entropy_is_homogeneous((s, v) in with_values(finite_space(16), flen, 0.0), c in 0.01f64..100.0) {
        let f = FieldFunction::new(&s, v.clone()).unwrap();
        prop_assume!(v.iter().any(|&x| x > 0.0));
        let cf = f.map(|x| c * x).unwrap();
        let (a, b) = (entropy(&cf).unwrap(), c * entropy(&f).unwrap());
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
    }

    #[test]
    fn entropy_vanishes_exactly_on_constants((s, v) in with_values(finite_space(16), flen, 0.0)) {
        prop_assume!(v.iter().any(|&x| x > 0.0));
        let f = FieldFunction::new(&s, v.clone()).unwrap();
        let e = entropy(&f).unwrap();
        prop_assert!(e >= 0.0);
        let spread = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - v.iter().cloned().fold(f64::INFINITY, f64::min);
        if spread > 1e-3 {
            prop_assert!(e > 0.0);
        }
        let k = FieldFunction::constant(&s, v[0].max(0.1)).unwrap();
        prop_assert!(entropy(&k).unwrap().abs() <= 1e-14);
    }

    #[test]
    fn all_tensorization_variants_hold((s, v) in with_values(product_space(), plen, 0.0)) {
        prop_assume!(v.iter().any(|&x| x > 0.0));
        let f = FieldFunction::new(&s, v).unwrap();
        for variant in TensorizationVariant::ALL {
            let r = tensorization_bound(&f, variant).unwrap();
            prop_assert!(r.margin >= -1e-10, "{:?}", r);
        }
    }

    #[test]
    fn symmetrized_dominates_plain((s, v) in with_values(product_space(), plen, 0.0)) {
        prop_assume!(v.iter().any(|&x| x > 0.0));
        let f = FieldFunction::new(&s, v).unwrap();
        let plain = tensorization_rhs(&f, TensorizationVariant::Entropy).unwrap();
        let sym = tensorization_rhs(&f, TensorizationVariant::Symmetrized).unwrap();
        prop_assert!(sym >= plain - 1e-10);
    }

    #[test]
    fn variational_minimum_is_at_the_mean((s, v) in with_values(finite_space(12), flen, 0.01)) {
        let f = FieldFunction::new(&s, v).unwrap();
        let ent = entropy(&f).unwrap();
        let m = f.mean();
        prop_assert!((variational_entropy(&f, m).unwrap() - ent).abs() <= 1e-8);
        for k in 1..=40 {
            let c = m * (0.25 + 0.05 * k as f64);
            prop_assert!(variational_entropy(&f, c).unwrap() >= ent - 1e-8);
        }
    }

    #[test]
    fn duality_gap_vanishes_for_positive_f((s, v) in with_values(finite_space(12), flen, 0.01)) {
        let f = FieldFunction::new(&s, v).unwrap();
        let gap = entropy_duality_gap(&f).unwrap();
        prop_assert!(gap.abs() <= 1e-9, "gap {gap}");
    }

    #[test]
    fn entropic_inequality_holds((s, v) in with_values(finite_space(12), flen, 0.0), g in prop::collection::vec(-4.0f64..4.0, 12)) {
        prop_assume!(v.iter().any(|&x| x > 0.0));
        let raw = FieldFunction::new(&s, v).unwrap();
        let m = raw.mean();
        let f = raw.map(|x| x / m).unwrap();
        let g = FieldFunction::new(&s, g[..flen(&s)].to_vec()).unwrap();
        let r = entropic_bound(&f, &g).unwrap();
        prop_assert!(r.pass, "{:?}", r);
    }
}
