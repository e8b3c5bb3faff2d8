//! Log-gamma and log-beta evaluation.
//!
//! Beta functions with one large argument show up everywhere in the posterior
//! (`B(k + 1, Y⁺ + 1)` with `Y⁺` in the hundreds of thousands), so everything
//! here works in log space. Differences `ln Γ(b) − ln Γ(a + b)` for large `b`
//! are taken from the Stirling series directly instead of subtracting two huge
//! log-gamma values.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln(2π)/2`.
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Above this argument the Stirling series is used for `ln Γ`.
const STIRLING_CUTOFF: f64 = 10.0;

/// Natural logarithm of `|Γ(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        // reflection
        let s = (PI * x).sin().abs();
        return PI.ln() - s.ln() - ln_gamma(1.0 - x);
    }
    if x >= STIRLING_CUTOFF {
        return (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_correction(x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    HALF_LN_2PI + (x + 0.5) * t.ln() - t + acc.ln()
}

/// `Γ(x)` for moderate arguments. Overflows to infinity above ~171.
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 {
        ln_gamma(x).exp()
    } else {
        let s = (PI * x).sin();
        PI / (s * gamma(1.0 - x))
    }
}

/// Remainder of the Stirling series, `ln Γ(x) − [(x − ½) ln x − x + ½ ln 2π]`.
fn stirling_correction(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    r * (1.0 / 12.0
        - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0 - r2 * (1.0 / 1188.0 - r2 * 691.0 / 360_360.0)))))
}

/// `ln Γ(b) − ln Γ(a + b)` for `a ≥ 0`, accurate when `b` is large.
pub fn ln_gamma_ratio(a: f64, b: f64) -> f64 {
    if b >= STIRLING_CUTOFF && a >= 0.0 {
        let ab = a + b;
        -a * ab.ln() - (b - 0.5) * (a / b).ln_1p() + a + stirling_correction(b) - stirling_correction(ab)
    } else {
        ln_gamma(b) - ln_gamma(a + b)
    }
}

/// `ln B(a, b)` for positive arguments.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    let (small, large) = if a <= b { (a, b) } else { (b, a) };
    ln_gamma(small) + ln_gamma_ratio(small, large)
}

/// `B(a, b)`, evaluated through [`ln_beta`].
pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

/// `ln(eᵃ + eᵇ)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}
