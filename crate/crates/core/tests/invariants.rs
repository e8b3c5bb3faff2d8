use ntr_core::data::{Dataset, RiskSummary};
use ntr_core::estimators::{aalen_nelson, product_limit_survival};
use ntr_core::posterior::{posterior_fixed_moments, posterior_moments, posterior_update};
use ntr_core::prior::{prior_moments, PriorSpec};
use ntr_core::sampling::{credible_interval, quantile_sorted, PathSampler, SamplerConfig};
use ntr_core::special::{ln_beta, ln_gamma};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Times on a coarse grid so ties occur.
fn dataset() -> impl Strategy<Value = Vec<(f64, bool)>> {
    prop::collection::vec((1u32..40, any::<bool>()), 1..40)
        .prop_map(|v| v.into_iter().map(|(k, e)| (k as f64 * 0.125, e)).collect())
}

fn prior() -> impl Strategy<Value = PriorSpec> {
    prop_oneof![
        (0.3f64..4.0).prop_map(|c| PriorSpec::beta(c, 1.0).unwrap()),
        (0.5f64..4.0).prop_map(|a| PriorSpec::dirichlet(a, 0.5).unwrap()),
        (0.1f64..1.5).prop_map(|a| PriorSpec::alpha(a).unwrap()),
    ]
}

fn risk(pairs: &[(f64, bool)]) -> RiskSummary {
    RiskSummary::from_dataset(&Dataset::from_pairs(pairs).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn aalen_nelson_depends_only_on_ranks(pairs in dataset()) {
        let warped: Vec<(f64, bool)> = pairs.iter().map(|&(t, e)| (t.powi(3) + 2.0 * t, e)).collect();
        let a = aalen_nelson(&risk(&pairs));
        let b = aalen_nelson(&risk(&warped));
        prop_assert_eq!(a.values(), b.values());
    }

    #[test]
    fn product_integral_is_a_survival_function(pairs in dataset()) {
        let s = product_limit_survival(&aalen_nelson(&risk(&pairs))).unwrap();
        let mut prev = 1.0;
        for k in 0..=45 {
            let v = s.value_at(k as f64 * 0.125);
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn csv_round_trip(pairs in prop::collection::vec((1e-9f64..1e6, any::<bool>()), 1..30)) {
        let data = Dataset::from_pairs(&pairs).unwrap();
        let mut buf = Vec::new();
        data.to_writer(&mut buf).unwrap();
        prop_assert_eq!(Dataset::from_reader(buf.as_slice()).unwrap(), data);
    }

    #[test]
    fn log_beta_is_symmetric_and_consistent(a in 0.05f64..50.0, b in 0.05f64..50.0) {
        let direct = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
        prop_assert!((ln_beta(a, b) - ln_beta(b, a)).abs() < 1e-12);
        prop_assert!((ln_beta(a, b) - direct).abs() < 1e-10 * (1.0 + direct.abs()));
    }

    #[test]
    fn data_shrink_the_posterior_mean_toward_the_estimator(pairs in dataset(), spec in prior()) {
        let r = risk(&pairs);
        let post = posterior_update(&spec, &r).unwrap();
        let t = 5.0;
        let (mean, var) = posterior_moments(&post, t).unwrap();
        let (fixed_mean, fixed_var) = posterior_fixed_moments(&post, t);
        prop_assert!(mean.is_finite() && var > 0.0);
        prop_assert!(mean >= fixed_mean && var >= fixed_var);
        let (prior_mean, _) = prior_moments(&spec, t).unwrap();
        prop_assert!(mean - fixed_mean <= prior_mean * (1.0 + 1e-9));
    }

    #[test]
    fn sampled_paths_are_valid(pairs in dataset(), spec in prior(), seed in any::<u64>()) {
        let r = risk(&pairs);
        let post = posterior_update(&spec, &r).unwrap();
        let cfg = SamplerConfig { epsilon: Some(1e-3), ..SamplerConfig::default() };
        let sampler = PathSampler::new(&post, 5.0, &cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let path = sampler.sample_path(&mut rng).unwrap();
        for w in path.jumps().windows(2) {
            prop_assert!(w[0].0 <= w[1].0);
        }
        for &(t, x) in path.jumps() {
            prop_assert!(x > 0.0 && x <= 1.0);
            prop_assert!((0.0..=5.0).contains(&t));
        }
        for &t in r.event_times() {
            prop_assert!(path.jumps().iter().any(|&(s, _)| s == t));
        }
        let s = product_limit_survival(&path).unwrap();
        prop_assert!((0.0..=1.0).contains(&s.value_at(5.0)));
    }

    #[test]
    fn credible_interval_brackets_the_median(values in prop::collection::vec(-1e3f64..1e3, 2..200), level in 0.01f64..0.99) {
        let (lo, hi) = credible_interval(&values, level).unwrap();
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        let med = quantile_sorted(&sorted, 0.5);
        prop_assert!(lo <= med && med <= hi);
        prop_assert!(sorted[0] <= lo && hi <= sorted[sorted.len() - 1]);
    }
}
