use ltgmm_core::bounds::{
    crossover_t, gap_lower_bound, lda_error_formula, lda_error_shifted, mda_error_bound,
    mda_error_shifted_bound,
};
use ltgmm_core::{
    mom_estimate_mu, std_normal_cdf, Classifier, Component, Dataset, Label, LabeledPoint,
    LdaClassifier, MdaClassifier, ModelParams,
};
use proptest::prelude::*;

fn dataset_strategy() -> impl Strategy<Value = Dataset<f64>> {
    (1usize..6).prop_flat_map(|d| {
        prop::collection::vec(
            (prop::collection::vec(-10.0f64..10.0, d), 0usize..3),
            1..40,
        )
        .prop_map(move |rows| {
            let pts = rows
                .into_iter()
                .map(|(x, k)| LabeledPoint::from_component(x, Component::ALL[k]))
                .collect();
            Dataset::new(d, pts).unwrap()
        })
    })
}

fn map_points(ds: &Dataset<f64>, f: impl Fn(&[f64]) -> Vec<f64>) -> Dataset<f64> {
    let pts = ds
        .points()
        .iter()
        .map(|pt| LabeledPoint::new(f(&pt.x), pt.y, pt.k).unwrap())
        .collect();
    Dataset::new(ds.d(), pts).unwrap()
}

fn params_strategy() -> impl Strategy<Value = ModelParams<f64>> {
    (1usize..6)
        .prop_flat_map(|d| (prop::collection::vec(-3.0f64..3.0, d), 0.2f64..3.0, 0.51f64..0.99))
        .prop_filter("nonzero mu", |(mu, _, _)| mu.iter().any(|v| v.abs() > 1e-3))
        .prop_map(|(mu, sigma, p)| ModelParams::new(mu, sigma, p).unwrap())
}

proptest! {
    #[test]
    fn mom_scales_exactly_with_powers_of_two(ds in dataset_strategy(), e in -6i32..6, p in 0.51f64..0.99) {
        let c = 2f64.powi(e);
        let base = mom_estimate_mu(&ds, p).unwrap();
        let scaled = mom_estimate_mu(&map_points(&ds, |x| x.iter().map(|v| v * c).collect()), p).unwrap();
        for (a, b) in base.iter().zip(&scaled) {
            prop_assert_eq!(a * c, *b);
        }
    }

    #[test]
    fn mom_is_affine_equivariant(ds in dataset_strategy(), c in 0.1f64..10.0, p in 0.51f64..0.99) {
        let base = mom_estimate_mu(&ds, p).unwrap();
        let scaled = mom_estimate_mu(&map_points(&ds, |x| x.iter().map(|v| v * c).collect()), p).unwrap();
        for (a, b) in base.iter().zip(&scaled) {
            prop_assert!((a * c - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn lda_ignores_orthogonal_shifts(
        params in params_strategy(),
        raw in prop::collection::vec(-5.0f64..5.0, 5),
        shift in prop::collection::vec(-5.0f64..5.0, 5),
    ) {
        let d = params.d();
        let c = LdaClassifier::oracle(&params).unwrap();
        let w: Vec<f64> = c.mu_plus().iter().zip(c.mu_minus()).map(|(a, b)| a - b).collect();
        let ww: f64 = w.iter().map(|v| v * v).sum();
        let v = &shift[..d];
        let proj: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / ww;
        let v: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a - proj * b).collect();
        let x = &raw[..d];
        let moved: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a + b).collect();
        let s0 = c.linear_statistic(x).unwrap();
        let s1 = c.linear_statistic(&moved).unwrap();
        prop_assert!((s0 - s1).abs() < 1e-8, "{} vs {}", s0, s1);
    }

    #[test]
    fn oracle_decisions_are_scale_equivariant(
        params in params_strategy(),
        raw in prop::collection::vec(-8.0f64..8.0, 5),
        e in -5i32..5,
    ) {
        let c = 2f64.powi(e);
        let d = params.d();
        let big = ModelParams::new(params.mu().iter().map(|v| v * c).collect(), params.sigma() * c, params.p()).unwrap();
        let x = &raw[..d];
        let cx: Vec<f64> = x.iter().map(|v| v * c).collect();
        let lda = LdaClassifier::oracle(&params).unwrap();
        let lda_big = LdaClassifier::oracle(&big).unwrap();
        prop_assert_eq!(lda.classify(x).unwrap(), lda_big.classify(&cx).unwrap());
        let mda = MdaClassifier::oracle(&params);
        let mda_big = MdaClassifier::oracle(&big);
        prop_assert_eq!(mda.classify(x).unwrap(), mda_big.classify(&cx).unwrap());
    }

    #[test]
    fn negating_a_classifier_flips_every_label(params in params_strategy(), raw in prop::collection::vec(-8.0f64..8.0, 5)) {
        let c = LdaClassifier::oracle(&params).unwrap();
        let swapped = LdaClassifier::new(c.mu_minus().to_vec(), c.mu_plus().to_vec()).unwrap();
        let x = &raw[..params.d()];
        let (a, b) = (c.classify(x).unwrap(), swapped.classify(x).unwrap());
        // only an exact tie can make both positive
        prop_assert!(a != b || (a == Label::Pos && c.statistic(x).unwrap() == 0.0));
    }

    #[test]
    fn theorem_one_gap_holds_off_grid(nu in 0.05f64..8.0, p in 0.501f64..0.999) {
        let gap = lda_error_formula(nu, p).unwrap() - mda_error_bound(nu, p).unwrap();
        let floor = (1.0 - p) / 2.0 - std_normal_cdf(-nu).unwrap();
        prop_assert!(gap >= floor - 1e-12, "nu={} p={} gap={} floor={}", nu, p, gap, floor);
        prop_assert!(gap >= gap_lower_bound(nu, p).unwrap() - 1e-12);
    }

    #[test]
    fn lda_error_never_below_quarter_tail(nu in 1e-6f64..40.0, p in 0.501f64..=1.0) {
        prop_assert!(lda_error_formula(nu, p).unwrap() >= (1.0 - p) / 4.0);
    }

    #[test]
    fn closed_forms_are_continuous(nu in 0.1f64..6.0, p in 0.51f64..0.98, t in 2.5f64..5000.0) {
        let h = 1e-4;
        let pairs = [
            (lda_error_formula(nu, p).unwrap(), lda_error_formula(nu + h, p + h).unwrap()),
            (mda_error_bound(nu, p).unwrap(), mda_error_bound(nu + h, p + h).unwrap()),
            (gap_lower_bound(nu, p).unwrap(), gap_lower_bound(nu + h, p + h).unwrap()),
            (lda_error_shifted(nu, p, t).unwrap(), lda_error_shifted(nu + h, p + h, t + h).unwrap()),
            (mda_error_shifted_bound(nu, p, t).unwrap(), mda_error_shifted_bound(nu + h, p + h, t + h).unwrap()),
        ];
        for (a, b) in pairs {
            prop_assert!((a - b).abs() < 1e-3);
        }
        let c0 = crossover_t(nu).unwrap();
        let c1 = crossover_t(nu + h).unwrap();
        prop_assert!((c1 / c0 - 1.0).abs() < 1e-3 * (1.0 + 16.0 * nu));
    }

    #[test]
    fn mda_rules_agree(params in params_strategy(), raw in prop::collection::vec(-10.0f64..10.0, 5)) {
        let c = MdaClassifier::oracle(&params);
        let x = &raw[..params.d()];
        let (m1, m2) = c.margins(x).unwrap();
        // the two rules may differ only on a rounding-level tie
        if m1.abs() > 1e-9 && m2.abs() > 1e-9 {
            prop_assert_eq!(c.classify(x).unwrap(), c.classify_by_density(x).unwrap());
        }
    }
}

#[test]
fn theorem_one_gap_on_exhaustive_grid() {
    let mut violations = 0;
    for i in 1..=12 {
        let nu = 0.5 * i as f64;
        for j in 0..9 {
            let p = 0.55 + 0.05 * j as f64;
            let gap = lda_error_formula(nu, p).unwrap() - mda_error_bound(nu, p).unwrap();
            let floor = (1.0 - p) / 2.0 - std_normal_cdf(-nu).unwrap();
            if gap < floor - 1e-12 {
                violations += 1;
            }
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn crossover_bracketing_search() {
    for nu in [0.3f64, 0.5, 0.8, 1.0] {
        let diff = |t: f64| std_normal_cdf(3.0 * nu).unwrap() - std_normal_cdf(-nu + t.ln() / (2.0 * nu)).unwrap();
        let (mut lo, mut hi) = (2.0f64, 1e300f64);
        assert!(diff(lo) > 0.0 && diff(hi) < 0.0);
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if diff(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let want = crossover_t(nu).unwrap();
        assert!((lo / want - 1.0).abs() < 1e-3, "nu={nu}: {lo} vs {want}");
    }
}
