//! Adaptive Gauss–Kronrod (7/15-point Gauss–Legendre pair) integration.
//!
//! The integrands in this crate are smooth in the interior but can behave like
//! `x^(α−1)` at an endpoint or be concentrated in a sliver of width `O(1/Y)`
//! next to zero. Callers handle the latter by passing break points (see
//! [`geometric_breaks`]); the adaptive bisection takes care of the rest.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the 7-point rule, matched to `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Four-point Gauss–Legendre nodes and weights on `[-1, 1]`.
pub(crate) const GL4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
    (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-10, rel: 1e-12, max_intervals: 4000 }
    }
}

impl Tolerance {
    pub fn with_abs(abs: f64) -> Self {
        Self { abs, ..Self::default() }
    }
}

/// One Gauss–Kronrod evaluation on `[a, b]`: (integral, error estimate).
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = kron.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kron += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let result = kron * half;
    let mut err = ((kron - gauss) * half).abs();
    let res_abs = abs_sum * half.abs();
    // QUADPACK-style rescaling of the raw Gauss/Kronrod difference.
    if err > 0.0 {
        let scale = (200.0 * err / res_abs.max(f64::MIN_POSITIVE)).powf(1.5);
        err = res_abs * scale.min(1.0);
    }
    let round_off = 50.0 * f64::EPSILON * res_abs;
    if round_off > err {
        err = round_off;
    }
    (result, err)
}

#[derive(Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Integrate `f` over `[a, b]` by global adaptive bisection.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    integrate_with_breaks(f, &[a, b], tol)
}

/// Integrate over consecutive segments `points[0]..points[1]..…`.
///
/// Each segment starts as its own interval in the work queue; the error budget
/// is shared across all of them.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: Tolerance) -> Result<f64> {
    if points.len() < 2 {
        return Ok(0.0);
    }
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Quadrature(format!("non-finite bound in [{a}, {b}]")));
        }
        if b <= a {
            continue;
        }
        let (value, err) = kronrod15(&f, a, b);
        total += value;
        total_err += err;
        heap.push(Segment { a, b, value, err });
    }
    let mut count = heap.len();
    loop {
        if !total.is_finite() {
            return Err(Error::Quadrature(format!(
                "integrand is not finite on [{}, {}]",
                points[0],
                points[points.len() - 1]
            )));
        }
        if total_err <= tol.abs.max(tol.rel * total.abs()) {
            return Ok(total);
        }
        if count >= tol.max_intervals {
            return Err(Error::Quadrature(format!(
                "no convergence after {count} subintervals (estimate {total:e}, error {total_err:e})"
            )));
        }
        let Some(worst) = heap.pop() else {
            return Ok(total);
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval cannot be split further in floating point.
            return Err(Error::Quadrature(format!("interval collapsed near {} (error {total_err:e})", worst.a)));
        }
        let (v1, e1) = kronrod15(&f, worst.a, mid);
        let (v2, e2) = kronrod15(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Segment { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, err: e2 });
        count += 1;
    }
}

/// Break points `a, a + h/2^k, …, a + h/2, b` clustered towards `a`.
pub fn geometric_breaks(a: f64, b: f64, levels: usize) -> Vec<f64> {
    let h = b - a;
    let mut pts = Vec::with_capacity(levels + 2);
    pts.push(a);
    for k in (1..=levels).rev() {
        pts.push(a + h * 0.5f64.powi(k as i32));
    }
    pts.push(b);
    pts
}

/// Fixed four-point Gauss–Legendre rule on `[a, b]`.
pub(crate) fn gauss_legendre4<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    GL4.iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| x * x * x, 0.0, 2.0, Tolerance::default()).unwrap();
        assert!((v - 4.0).abs() < 1e-14);
        let g = gauss_legendre4(|x| x.powi(7), 0.0, 1.0);
        assert!((g - 0.125).abs() < 1e-14);
    }

    #[test]
    fn endpoint_power_singularity() {
        // ∫₀¹ x^(-3/4) dx = 4
        let v = integrate_with_breaks(
            |x| x.powf(-0.75),
            &geometric_breaks(0.0, 1.0, 40),
            Tolerance { abs: 1e-10, rel: 1e-10, max_intervals: 4000 },
        )
        .unwrap();
        assert!((v - 4.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn sharp_peak_needs_breaks() {
        let y = 1e5;
        let f = |x: f64| (y * (-x).ln_1p()).exp();
        let v = integrate_with_breaks(f, &[0.0, 1.0 / y, 50.0 / y, 1.0], Tolerance::with_abs(1e-18)).unwrap();
        assert!(((v - 1.0 / (y + 1.0)) * (y + 1.0)).abs() < 1e-9);
    }

    #[test]
    fn reversed_or_empty_is_zero() {
        assert_eq!(integrate(|x| x, 1.0, 1.0, Tolerance::default()).unwrap(), 0.0);
        assert_eq!(integrate_with_breaks(|x| x, &[0.0], Tolerance::default()).unwrap(), 0.0);
    }

    #[test]
    fn non_finite_is_an_error() {
        let r = integrate(|_| f64::NAN, 0.0, 1.0, Tolerance::default());
        assert!(matches!(r, Err(Error::Quadrature(_))));
    }

    #[test]
    fn gives_up_after_budget() {
        let tol = Tolerance { abs: 1e-300, rel: 0.0, max_intervals: 10 };
        let r = integrate(|x| (1.0 / x).sin(), 1e-6, 1.0, tol);
        assert!(r.is_err());
    }
}
