//! The averaged scaled bias agrees with a deterministic finite-n prediction:
//! `n^α ∫ (m(Y) − 1/Y) Y dA_0(s)` with `Y = nQ(s)` and `m(Y)` the exact
//! posterior mean of a single-death jump.

use ntr_core::data::GenerativeModel;
use ntr_core::experiments::run_bias_study;
use ntr_core::prior::PriorSpec;
use ntr_core::quadrature::{integrate, Tolerance};
use ntr_core::special::{ln_beta, log_add_exp};

fn single_death_mean(y: f64, alpha: f64) -> f64 {
    let l0 = log_add_exp(ln_beta(1.0, y), ln_beta(1.0 + alpha, y));
    let l1 = log_add_exp(ln_beta(2.0, y), ln_beta(2.0 + alpha, y));
    (l1 - l0).exp()
}

fn predicted(n: f64, alpha: f64) -> f64 {
    let f = |s: f64| {
        let y = n * (-1.25 * s).exp();
        (single_death_mean(y, alpha) - 1.0 / y) * y
    };
    n.powf(alpha) * integrate(f, 0.0, 2.0, Tolerance { abs: 1e-12, rel: 1e-10, max_intervals: 200 }).unwrap()
}

#[test]
fn bias_study_matches_finite_sample_prediction() {
    let model = GenerativeModel::new(1.0, 0.25).unwrap();
    for alpha in [0.25, 0.5] {
        let s = run_bias_study(2000, &PriorSpec::alpha(alpha).unwrap(), &model, 2.0, 40, 3).unwrap();
        let p = predicted(2000.0, alpha);
        assert!((s.mean - p).abs() < 4.0 * s.se + 0.01 * p, "alpha {alpha}: {} vs {p} (se {})", s.mean, s.se);
        assert!(p < s.target);
    }
}
