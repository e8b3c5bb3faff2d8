//! Priors neutral to the right, described by their Lévy measure
//! `ν(ds, dx) = x⁻¹ g_s(x) λ(s) dx ds` with `∫₀¹ g_s(x) dx = 1`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::data::RiskInterval;
use crate::error::{Error, Result};
use crate::posterior::levy_moments;
use crate::quadrature::{geometric_breaks, integrate, integrate_with_breaks, Tolerance};

/// `g(t, x)` evaluator for custom priors.
pub type DensityFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Time-only evaluator (`λ(t)`, `q(t)`).
pub type RateFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied `(g, λ)` pair.
#[derive(Clone)]
pub struct CustomPrior {
    pub label: String,
    pub g: DensityFn,
    pub lambda: RateFn,
    /// `lim_{x→0} g_t(x)`, if known in closed form.
    pub q: Option<RateFn>,
    pub alpha_smoothness: Option<f64>,
    /// `g` and `λ` do not depend on `t`.
    pub time_homogeneous: bool,
}

impl fmt::Debug for CustomPrior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPrior")
            .field("label", &self.label)
            .field("has_q", &self.q.is_some())
            .field("alpha_smoothness", &self.alpha_smoothness)
            .field("time_homogeneous", &self.time_homogeneous)
            .finish()
    }
}

/// Built-in prior families plus a custom escape hatch.
#[derive(Debug, Clone)]
pub enum PriorFamily {
    /// Beta process, `g_t(x) = c(1−x)^(c−1)`, constant intensity `λ`.
    Beta {
        c: f64,
        lambda: f64,
    },
    /// Beta process induced by a Dirichlet process with total mass `a` and an
    /// exponential base distribution `H(t) = 1 − e^(−θt)`:
    /// `c(t) = a(1 − H(t))`, `λ(t) = θ`.
    Dirichlet {
        mass: f64,
        base_rate: f64,
    },
    /// Gamma process on `−log(1 − F)` with shape `d` and base rate `h`.
    /// `normalizer` caches `c(d)`.
    Gamma {
        d: f64,
        h: f64,
        normalizer: f64,
    },
    /// The family `ν_α(dt, dx) = x⁻¹(1 + x^α) dx dt`, stored normalized:
    /// `λ = (α+2)/(α+1)`, `g(x) = (1 + x^α)(α+1)/(α+2)`.
    Alpha {
        alpha: f64,
    },
    Custom(CustomPrior),
}

/// A prior neutral to the right in `(g, λ)` form.
#[derive(Debug, Clone)]
pub struct PriorSpec {
    family: PriorFamily,
}

/// `(1 − x)^e` without the `0 · ∞` trap at `x = 1`.
#[inline]
pub(crate) fn pow_one_minus(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        (e * (-x).ln_1p()).exp()
    }
}

/// `(1 − x)^e` given `y = 1 − x` as well, using whichever is more accurate.
#[inline]
pub(crate) fn pow_pair(x: f64, y: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if x < 0.5 {
        (e * (-x).ln_1p()).exp()
    } else {
        y.powf(e)
    }
}

/// `x / (−ln(1 − x))` with `y = 1 − x`, continuous at both ends.
#[inline]
fn x_over_neg_log1m(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else if y <= 0.0 {
        0.0
    } else if x < 0.5 {
        x / -(-x).ln_1p()
    } else {
        x / -y.ln()
    }
}

impl PriorSpec {
    pub fn beta(c: f64, lambda: f64) -> Result<Self> {
        check_positive("c", c)?;
        check_positive("lambda", lambda)?;
        Ok(Self { family: PriorFamily::Beta { c, lambda } })
    }

    pub fn dirichlet(mass: f64, base_rate: f64) -> Result<Self> {
        check_positive("mass", mass)?;
        check_positive("base rate", base_rate)?;
        Ok(Self { family: PriorFamily::Dirichlet { mass, base_rate } })
    }

    pub fn gamma(d: f64, h: f64) -> Result<Self> {
        check_positive("d", d)?;
        check_positive("h", h)?;
        let normalizer = gamma_normalizer(d)?;
        Ok(Self { family: PriorFamily::Gamma { d, h, normalizer } })
    }

    pub fn alpha(alpha: f64) -> Result<Self> {
        check_positive("alpha", alpha)?;
        Ok(Self { family: PriorFamily::Alpha { alpha } })
    }

    pub fn custom(custom: CustomPrior) -> Self {
        Self { family: PriorFamily::Custom(custom) }
    }

    /// Builds a custom prior from a Lévy density `f_t(x)` via
    /// `λ(t) = ∫ x f_t(x) dx`, `g_t(x) = x f_t(x)/λ(t)`.
    ///
    /// `λ` is computed by quadrature on every call; intended for diagnostics.
    pub fn from_levy_density(
        label: impl Into<String>,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        time_homogeneous: bool,
    ) -> Self {
        let f: DensityFn = Arc::new(f);
        let f_l = Arc::clone(&f);
        let lambda: RateFn = Arc::new(move |t| {
            let f_l = Arc::clone(&f_l);
            // Doubles cannot resolve a singularity at x = 1 beyond ~1e-16, so
            // the relative tolerance is loose.
            let mut pts = geometric_breaks(0.0, 0.5, 40);
            pts.pop();
            pts.extend(geometric_breaks(0.0, 0.5, 40).into_iter().rev().map(|d| 1.0 - d));
            let h = move |x: f64| {
                let v = x * f_l(t, x);
                if v.is_finite() || x < 1.0 {
                    v
                } else {
                    0.0
                }
            };
            integrate_with_breaks(h, &pts, Tolerance { abs: 1e-12, rel: 1e-8, max_intervals: 4000 }).unwrap_or(f64::NAN)
        });
        let lambda_g = Arc::clone(&lambda);
        let g: DensityFn = Arc::new(move |t, x| x * f(t, x) / lambda_g(t));
        Self::custom(CustomPrior { label: label.into(), g, lambda, q: None, alpha_smoothness: None, time_homogeneous })
    }

    pub fn family(&self) -> &PriorFamily {
        &self.family
    }

    /// `g_t(x)`. No range check; see [`eval_g`].
    pub fn g(&self, t: f64, x: f64) -> f64 {
        self.g_split(t, x, 1.0 - x)
    }

    /// `g_t(x)` with `y = 1 − x` passed separately, so that `x → 1` can be
    /// resolved below the spacing of doubles near one.
    pub fn g_split(&self, t: f64, x: f64, y: f64) -> f64 {
        match &self.family {
            PriorFamily::Beta { c, .. } => c * pow_pair(x, y, c - 1.0),
            PriorFamily::Dirichlet { .. } => {
                let c = self.beta_scale(t).unwrap_or(0.0);
                c * pow_pair(x, y, c - 1.0)
            }
            PriorFamily::Gamma { d, normalizer, .. } => normalizer * x_over_neg_log1m(x, y) * pow_pair(x, y, d - 1.0),
            PriorFamily::Alpha { alpha } => (1.0 + x.powf(*alpha)) * (alpha + 1.0) / (alpha + 2.0),
            PriorFamily::Custom(c) => (c.g)(t, x),
        }
    }

    /// `(1 − x) g_t(x)`, finite at `x = 1` for every built-in family.
    pub fn g_times_one_minus(&self, t: f64, x: f64) -> f64 {
        let y = 1.0 - x;
        match &self.family {
            PriorFamily::Beta { c, .. } => c * pow_one_minus(x, *c),
            PriorFamily::Dirichlet { .. } => {
                let c = self.beta_scale(t).unwrap_or(0.0);
                c * pow_one_minus(x, c)
            }
            PriorFamily::Gamma { d, normalizer, .. } => normalizer * x_over_neg_log1m(x, y) * pow_one_minus(x, *d),
            _ => {
                if x >= 1.0 {
                    0.0
                } else {
                    y * self.g(t, x)
                }
            }
        }
    }

    /// `λ(t)`.
    pub fn lambda(&self, t: f64) -> f64 {
        match &self.family {
            PriorFamily::Beta { lambda, .. } => *lambda,
            PriorFamily::Dirichlet { base_rate, .. } => *base_rate,
            PriorFamily::Gamma { d, h, normalizer } => d * h / normalizer,
            PriorFamily::Alpha { alpha } => (alpha + 2.0) / (alpha + 1.0),
            PriorFamily::Custom(c) => (c.lambda)(t),
        }
    }

    /// Lévy density `f_t(x) = g_t(x) λ(t) / x`.
    pub fn levy_density(&self, t: f64, x: f64) -> f64 {
        self.g(t, x) * self.lambda(t) / x
    }

    /// `q(t) = lim_{x→0} g_t(x)` when known analytically.
    pub fn q(&self, t: f64) -> Option<f64> {
        match &self.family {
            PriorFamily::Beta { c, .. } => Some(*c),
            PriorFamily::Dirichlet { .. } => self.beta_scale(t),
            PriorFamily::Gamma { normalizer, .. } => Some(*normalizer),
            PriorFamily::Alpha { alpha } => Some((alpha + 1.0) / (alpha + 2.0)),
            PriorFamily::Custom(c) => c.q.as_ref().map(|q| q(t)),
        }
    }

    /// Smoothness exponent of `g` at zero, when known analytically.
    pub fn alpha_smoothness(&self) -> Option<f64> {
        match &self.family {
            PriorFamily::Beta { .. } | PriorFamily::Dirichlet { .. } | PriorFamily::Gamma { .. } => Some(1.0),
            PriorFamily::Alpha { alpha } => Some(*alpha),
            PriorFamily::Custom(c) => c.alpha_smoothness,
        }
    }

    /// For beta-type families, the scale `c(t)` in `g_t(x) = c(t)(1−x)^(c(t)−1)`.
    pub fn beta_scale(&self, t: f64) -> Option<f64> {
        match &self.family {
            PriorFamily::Beta { c, .. } => Some(*c),
            PriorFamily::Dirichlet { mass, base_rate } => Some(mass * (-base_rate * t).exp()),
            _ => None,
        }
    }

    pub fn alpha_parameter(&self) -> Option<f64> {
        match &self.family {
            PriorFamily::Alpha { alpha } => Some(*alpha),
            _ => None,
        }
    }

    pub fn is_time_homogeneous(&self) -> bool {
        match &self.family {
            PriorFamily::Dirichlet { .. } => false,
            PriorFamily::Custom(c) => c.time_homogeneous,
            _ => true,
        }
    }

    /// Short label used in reports, in the CLI prior syntax.
    pub fn label(&self) -> String {
        match &self.family {
            PriorFamily::Beta { c, lambda } => format!("beta:c={c},lambda={lambda}"),
            PriorFamily::Dirichlet { mass, base_rate } => format!("dirichlet:a={mass},lambda={base_rate}"),
            PriorFamily::Gamma { d, h, .. } => format!("gamma:d={d},h={h}"),
            PriorFamily::Alpha { alpha } => format!("alpha:a={alpha}"),
            PriorFamily::Custom(c) => c.label.clone(),
        }
    }

    /// `∫ₐᵇ λ(s) φ(s) ds`, exact for time-homogeneous priors.
    pub(crate) fn integrate_in_time(&self, a: f64, b: f64, phi: impl Fn(f64) -> Result<f64>) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        if self.is_time_homogeneous() {
            return Ok(self.lambda(a) * phi(a)? * (b - a));
        }
        let failure = std::cell::RefCell::new(None);
        let v = integrate(
            |s| match phi(s) {
                Ok(v) => self.lambda(s) * v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            },
            a,
            b,
            Tolerance { abs: 1e-13, rel: 1e-11, max_intervals: 2000 },
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        v
    }
}

impl fmt::Display for PriorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

impl FromStr for PriorSpec {
    type Err = Error;

    /// Parses `family:param=value[,param=value]`.
    ///
    /// Families: `beta` (`c`, `lambda`), `dirichlet` (`a`, `lambda`),
    /// `gamma` (`d`, `h`), `alpha` (`a`).
    fn from_str(s: &str) -> Result<Self> {
        let (family, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params: Vec<(String, f64)> = Vec::new();
        for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("prior parameter `{part}` is not key=value")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("prior parameter `{k}` value `{v}` is not a number")))?;
            params.push((k.trim().to_string(), v));
        }
        let allowed: &[&str] = match family.trim() {
            "beta" => &["c", "lambda"],
            "dirichlet" => &["a", "lambda"],
            "gamma" => &["d", "h"],
            "alpha" => &["a"],
            other => return Err(Error::invalid(format!("unknown prior family `{other}`"))),
        };
        for (k, _) in &params {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::invalid(format!("prior family `{family}` has no parameter `{k}`")));
            }
        }
        let get = |k: &str, default: Option<f64>| -> Result<f64> {
            params
                .iter()
                .rev()
                .find(|(name, _)| name == k)
                .map(|(_, v)| *v)
                .or(default)
                .ok_or_else(|| Error::invalid(format!("prior `{family}` requires parameter `{k}`")))
        };
        match family.trim() {
            "beta" => PriorSpec::beta(get("c", Some(1.0))?, get("lambda", Some(1.0))?),
            "dirichlet" => PriorSpec::dirichlet(get("a", Some(1.0))?, get("lambda", Some(1.0))?),
            "gamma" => PriorSpec::gamma(get("d", Some(1.0))?, get("h", Some(1.0))?),
            _ => PriorSpec::alpha(get("a", None)?),
        }
    }
}

/// `g_t(x)` with the range check on `x`.
pub fn eval_g(spec: &PriorSpec, t: f64, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("jump size must lie in [0, 1], got {x}")));
    }
    Ok(spec.g(t, x))
}

/// Gamma-process normalizer `c(d) = (∫₀¹ x/(−log(1−x)) (1−x)^(d−1) dx)⁻¹`.
pub fn gamma_normalizer(d: f64) -> Result<f64> {
    check_positive("d", d)?;
    // With u = 1 − x the integrand is (1−u) u^(d−1) / (−ln u); any
    // singularity sits at u = 0.
    let integrand = |u: f64| {
        if u <= 0.0 {
            return if d > 1.0 { 0.0 } else { f64::NAN };
        }
        if u >= 1.0 {
            return 1.0;
        }
        let ln_u = u.ln();
        (1.0 - u) * ((d - 1.0) * ln_u).exp() / -ln_u
    };
    let tol = Tolerance { abs: 1e-14, rel: 1e-13, max_intervals: 4000 };
    let integral = integrate_with_breaks(integrand, &geometric_breaks(0.0, 1.0, 60), tol)?;
    if !(integral > 0.0 && integral.is_finite()) {
        return Err(Error::Quadrature(format!("gamma normalizer integral is {integral} for d = {d}")));
    }
    Ok(1.0 / integral)
}

/// Mean and variance of `A(t)` under the prior.
///
/// Shares its code path with the continuous posterior part (at `Y_n ≡ 0`), so
/// a posterior built from no data reproduces these values bit for bit.
pub fn prior_moments(spec: &PriorSpec, t: f64) -> Result<(f64, f64)> {
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("time must be >= 0, got {t}")));
    }
    levy_moments(spec, &[RiskInterval { start: 0.0, end: t, at_risk: 0 }])
}

/// Where `q(t)` came from in a [`ConditionReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QSource {
    Analytic,
    /// Estimated as the limit of `g_t(x)` for `x → 0`.
    Numeric,
    /// No finite limit could be detected.
    Unavailable,
}

/// Grid diagnostics for Conditions A1–A3. These are heuristics evaluated on a
/// finite grid, not proofs.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub a1_sup: f64,
    /// Same supremum on a four times finer grid.
    pub a1_sup_refined: f64,
    pub q_source: QSource,
    pub q_min: Option<f64>,
    pub q_max: Option<f64>,
    /// `INFINITY` when `g_t(x) = q(t)` on the whole near-zero grid.
    pub a2_alpha_hat: Option<f64>,
    pub a2_residual: Option<f64>,
    pub a3_min: f64,
    pub a3_max: f64,
    pub pass_a1: bool,
    pub pass_a2: bool,
    pub pass_a3: bool,
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<f64>| v.map_or_else(|| "unavailable".to_string(), |v| format!("{v:.6}"));
        writeln!(f, "a1_sup = {:.6} (refined {:.6})  pass_a1 = {}", self.a1_sup, self.a1_sup_refined, self.pass_a1)?;
        let q = match self.q_source {
            QSource::Unavailable => "q unavailable".to_string(),
            src => format!("q in [{}, {}] ({src:?})", opt(self.q_min), opt(self.q_max)),
        };
        writeln!(f, "{q}")?;
        writeln!(
            f,
            "a2_alpha_hat = {}  a2_residual = {}  pass_a2 = {}",
            opt(self.a2_alpha_hat),
            opt(self.a2_residual),
            self.pass_a2
        )?;
        write!(f, "a3_min = {:.6}  a3_max = {:.6}  pass_a3 = {}", self.a3_min, self.a3_max, self.pass_a3)
    }
}

/// Upper end of the near-zero window for the A2 exponent fit.
pub const A2_EPSILON: f64 = 0.1;
const A2_POINTS: usize = 20;
const A2_LOWEST: f64 = 1e-6;

fn numeric_q(spec: &PriorSpec, t: f64) -> Option<f64> {
    let vals: Vec<f64> = (6..=12).map(|k| spec.g(t, 10f64.powi(-k))).collect();
    let last = *vals.last()?;
    let prev = vals[vals.len() - 2];
    if last.is_finite() && ((last - prev).abs() <= 1e-4 * last.abs().max(1e-300)) {
        Some(last)
    } else {
        None
    }
}

/// Least-squares slope of `ln|g_t(x) − q|` against `ln x`, plus the
/// flat-case marker.
fn fit_exponent(spec: &PriorSpec, t: f64, q: f64, eps: f64) -> Option<f64> {
    let ratio = (eps / A2_LOWEST).ln() / (A2_POINTS - 1) as f64;
    let mut pts = Vec::with_capacity(A2_POINTS);
    let mut max_dev: f64 = 0.0;
    for k in 0..A2_POINTS {
        let x = A2_LOWEST * (ratio * k as f64).exp();
        let dev = (spec.g(t, x) - q).abs();
        max_dev = max_dev.max(dev);
        if dev > 0.0 && dev.is_finite() {
            pts.push((x.ln(), dev.ln()));
        }
    }
    if max_dev <= 1e-12 * q.abs().max(1.0) {
        return Some(f64::INFINITY);
    }
    if pts.len() < 3 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

fn a1_sup(spec: &PriorSpec, tau: f64, grid: usize) -> f64 {
    let mut sup: f64 = 0.0;
    for i in 0..grid {
        let t = if grid == 1 { 0.0 } else { tau * i as f64 / (grid - 1) as f64 };
        for j in 0..=grid {
            let x = j as f64 / grid as f64;
            let v = spec.g_times_one_minus(t, x);
            if v.is_nan() {
                return f64::INFINITY;
            }
            sup = sup.max(v);
        }
    }
    sup
}

/// Numeric diagnostics for Conditions A1–A3 on `[0, τ] × [0, 1]`.
pub fn check_conditions(spec: &PriorSpec, tau: f64, grid: usize) -> Result<ConditionReport> {
    if grid < 32 {
        return Err(Error::invalid(format!("condition grid needs at least 32 points per axis, got {grid}")));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid(format!("tau must be positive and finite, got {tau}")));
    }
    let sup = a1_sup(spec, tau, grid);
    let sup_fine = a1_sup(spec, tau, 4 * grid);
    let pass_a1 = sup.is_finite() && sup_fine.is_finite() && sup_fine <= sup * 1.05 + 1e-12;

    // A2 on a coarser time grid: the fit is per t.
    let t_points: Vec<f64> = (0..8).map(|i| tau * i as f64 / 7.0).collect();
    let mut source = QSource::Analytic;
    let mut qs = Vec::with_capacity(t_points.len());
    for &t in &t_points {
        match spec.q(t) {
            Some(q) => qs.push(q),
            None => match numeric_q(spec, t) {
                Some(q) => {
                    source = QSource::Numeric;
                    qs.push(q);
                }
                None => {
                    source = QSource::Unavailable;
                    break;
                }
            },
        }
    }
    let (mut q_min, mut q_max, mut alpha_hat, mut residual) = (None, None, None, None);
    if source != QSource::Unavailable {
        q_min = qs.iter().copied().reduce(f64::min);
        q_max = qs.iter().copied().reduce(f64::max);
        let mut worst: Option<f64> = None;
        for (&t, &q) in t_points.iter().zip(&qs) {
            match fit_exponent(spec, t, q, A2_EPSILON) {
                Some(a) => worst = Some(worst.map_or(a, |w: f64| w.min(a))),
                None => {
                    worst = None;
                    break;
                }
            }
        }
        alpha_hat = worst;
        if let Some(a) = worst {
            let mut r: f64 = 0.0;
            if a.is_finite() {
                let ratio = (A2_EPSILON / A2_LOWEST).ln() / (A2_POINTS - 1) as f64;
                for (&t, &q) in t_points.iter().zip(&qs) {
                    for k in 0..A2_POINTS {
                        let x = A2_LOWEST * (ratio * k as f64).exp();
                        r = r.max((spec.g(t, x) - q).abs() / x.powf(a));
                    }
                }
            }
            residual = Some(r);
        }
    }
    let pass_a2 = matches!((q_min, q_max), (Some(lo), Some(hi)) if lo > 0.0 && hi.is_finite())
        && matches!(alpha_hat, Some(a) if a > 0.0)
        && matches!(residual, Some(r) if r.is_finite());

    let lambdas: Vec<f64> = (0..grid).map(|i| spec.lambda(tau * i as f64 / (grid - 1) as f64)).collect();
    let a3_min = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
    let a3_max = lambdas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pass_a3 = a3_min > 0.0 && a3_max.is_finite();

    Ok(ConditionReport {
        a1_sup: sup,
        a1_sup_refined: sup_fine,
        q_source: source,
        q_min,
        q_max,
        a2_alpha_hat: alpha_hat,
        a2_residual: residual,
        a3_min,
        a3_max,
        pass_a1,
        pass_a2,
        pass_a3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn builtins() -> Vec<PriorSpec> {
        vec![
            PriorSpec::beta(1.0, 1.0).unwrap(),
            PriorSpec::beta(0.5, 2.0).unwrap(),
            PriorSpec::beta(3.0, 1.0).unwrap(),
            PriorSpec::dirichlet(4.0, 1.0).unwrap(),
            PriorSpec::gamma(1.0, 1.0).unwrap(),
            PriorSpec::gamma(0.5, 2.0).unwrap(),
            PriorSpec::alpha(0.25).unwrap(),
            PriorSpec::alpha(1.0).unwrap(),
        ]
    }

    #[test]
    fn eval_g_examples() {
        let b = PriorSpec::beta(2.0, 1.0).unwrap();
        assert!((eval_g(&b, 0.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        let a = PriorSpec::alpha(1.0).unwrap();
        assert!((eval_g(&a, 0.0, 0.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(eval_g(&a, 0.0, 1.5).is_err());
        assert!(eval_g(&a, 0.0, -0.1).is_err());
    }

    #[test]
    fn every_builtin_is_normalized() {
        let tol = Tolerance { abs: 1e-12, rel: 1e-12, max_intervals: 4000 };
        for spec in builtins() {
            for i in 0..32 {
                let t = 2.0 * i as f64 / 31.0;
                let lower = integrate_with_breaks(|x| spec.g(t, x), &geometric_breaks(0.0, 0.5, 40), tol).unwrap();
                let upper =
                    integrate_with_breaks(|y| spec.g_split(t, 1.0 - y, y), &geometric_breaks(0.0, 0.5, 60), tol)
                        .unwrap();
                let v = lower + upper;
                assert!((v - 1.0).abs() < 1e-8, "{} at t={t}: {v}", spec.label());
            }
        }
    }

    #[test]
    fn levy_density_round_trip() {
        for spec in builtins() {
            let s2 = spec.clone();
            let rebuilt = PriorSpec::from_levy_density("rebuilt", move |t, x| s2.levy_density(t, x), true);
            for &t in &[0.0, 0.7, 1.9] {
                let (l0, l1) = (spec.lambda(t), rebuilt.lambda(t));
                assert!(((l1 - l0) / l0).abs() < 1e-6, "{}: {l0} vs {l1}", spec.label());
                let (g0, g1) = (spec.g(t, 0.3), rebuilt.g(t, 0.3));
                assert!(((g1 - g0) / g0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn gamma_normalizer_closed_form() {
        // ∫₀¹ (u^(d−1) − u^d)/(−ln u) du = ln((d+1)/d)
        let c1 = gamma_normalizer(1.0).unwrap();
        assert!(((c1 - 1.0 / 2f64.ln()) * 2f64.ln()).abs() < 1e-8, "{c1}");
        assert!((c1 - std::f64::consts::LOG2_E).abs() < 1e-6);
        for &d in &[0.3, 0.5, 2.0, 4.0, 10.0] {
            let c = gamma_normalizer(d).unwrap();
            let exact = 1.0 / (1.0 + 1.0 / d).ln();
            assert!(((c - exact) / exact).abs() < 1e-8, "d={d}: {c} vs {exact}");
        }
        let (c1, c2, c4) =
            (gamma_normalizer(1.0).unwrap(), gamma_normalizer(2.0).unwrap(), gamma_normalizer(4.0).unwrap());
        assert!(c1 < c2 && c2 < c4);
        assert!(gamma_normalizer(0.0).is_err());
    }

    #[test]
    fn prior_moment_examples() {
        let b = PriorSpec::beta(1.0, 1.0).unwrap();
        let (m, v) = prior_moments(&b, 3.0).unwrap();
        assert!((m - 3.0).abs() < 1e-13 && (v - 1.5).abs() < 1e-13);
        let a = PriorSpec::alpha(1.0).unwrap();
        let (m, v) = prior_moments(&a, 2.0).unwrap();
        assert!((m - 3.0).abs() < 1e-14 && (v - 5.0 / 3.0).abs() < 1e-14);
        assert_eq!(prior_moments(&a, 0.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn prior_moments_closed_form_vs_quadrature() {
        for spec in [PriorSpec::beta(2.5, 1.5).unwrap(), PriorSpec::alpha(0.5).unwrap()] {
            let (m, v) = prior_moments(&spec, 1.7).unwrap();
            let mq = spec.lambda(0.0) * 1.7;
            let vq = spec.lambda(0.0)
                * 1.7
                * integrate_with_breaks(|x| x * spec.g(0.0, x), &geometric_breaks(0.0, 1.0, 30), Tolerance::default())
                    .unwrap();
            assert!(((m - mq) / m).abs() < 1e-12);
            assert!(((v - vq) / v).abs() < 1e-9, "{} {v} {vq}", spec.label());
        }
        // Dirichlet: mean = θt; variance = ∫ θ/(c(s) + 1) ds with c(s) = a e^(−θs).
        let d = PriorSpec::dirichlet(3.0, 0.8).unwrap();
        let (m, v) = prior_moments(&d, 2.0).unwrap();
        assert!((m - 1.6).abs() < 1e-12);
        let c = |s: f64| 3.0 * (-0.8 * s).exp();
        // ∫ θ/(c+1) ds = θt − ∫ θc/(c+1) ds = θt − [ln(1 + c(0)) − ln(1 + c(t))]  (dc/ds = −θc)
        let exact = 1.6 - ((c(0.0) + 1.0).ln() - (c(2.0) + 1.0).ln());
        assert!(((v - exact) / exact).abs() < 1e-9, "{v} vs {exact}");
    }

    #[test]
    fn parse_prior_syntax() {
        let p: PriorSpec = "alpha:a=0.25".parse().unwrap();
        assert_eq!(p.alpha_parameter(), Some(0.25));
        let p: PriorSpec = "beta:c=2,lambda=0.5".parse().unwrap();
        assert_eq!(p.beta_scale(0.0), Some(2.0));
        assert_eq!(p.lambda(0.0), 0.5);
        assert!("gamma:d=2,h=1".parse::<PriorSpec>().is_ok());
        assert!("dirichlet:a=5,lambda=1".parse::<PriorSpec>().is_ok());
        assert!("alpha".parse::<PriorSpec>().is_err());
        assert!("weibull:k=1".parse::<PriorSpec>().is_err());
        assert!("beta:k=1".parse::<PriorSpec>().is_err());
        assert!("beta:c=x".parse::<PriorSpec>().is_err());
        assert!("alpha:a=-1".parse::<PriorSpec>().is_err());
        let p: PriorSpec = "beta:c=1.5,lambda=2".parse().unwrap();
        assert_eq!(p.label().parse::<PriorSpec>().unwrap().label(), p.label());
    }

    #[test]
    fn conditions_beta() {
        let spec = PriorSpec::beta(2.0, 1.0).unwrap();
        let r = check_conditions(&spec, 2.0, 32).unwrap();
        assert!(r.a1_sup <= 2.0 + 1e-12);
        assert_eq!(r.q_min, Some(2.0));
        assert!((r.a2_alpha_hat.unwrap() - 1.0).abs() < 0.01, "{:?}", r.a2_alpha_hat);
        assert!(r.pass_a1 && r.pass_a2 && r.pass_a3);
        assert!(r.a3_min <= r.a3_max);
        // c = 1 makes g flat.
        let r = check_conditions(&PriorSpec::beta(1.0, 1.0).unwrap(), 2.0, 32).unwrap();
        assert_eq!(r.a2_alpha_hat, Some(f64::INFINITY));
        assert!(r.pass_a2);
    }

    #[test]
    fn conditions_alpha_exponent() {
        let r = check_conditions(&PriorSpec::alpha(0.25).unwrap(), 2.0, 32).unwrap();
        assert!((r.a2_alpha_hat.unwrap() - 0.25).abs() < 0.05);
        assert!(r.pass_a1 && r.pass_a2 && r.pass_a3);
    }

    #[test]
    fn conditions_gamma_and_dirichlet() {
        let spec = PriorSpec::gamma(2.0, 1.0).unwrap();
        let r = check_conditions(&spec, 2.0, 32).unwrap();
        assert_eq!(r.q_min, Some(gamma_normalizer(2.0).unwrap()));
        assert!((r.a2_alpha_hat.unwrap() - 1.0).abs() < 0.05, "{:?}", r.a2_alpha_hat);
        assert!(r.pass_a1 && r.pass_a2 && r.pass_a3);
        let r = check_conditions(&PriorSpec::dirichlet(4.0, 1.0).unwrap(), 2.0, 32).unwrap();
        assert!(r.pass_a1 && r.pass_a2 && r.pass_a3);
        assert!(r.a1_sup <= 4.0 + 1e-12);
    }

    #[test]
    fn conditions_flag_bad_priors() {
        // λ vanishes: A3 fails.
        let zero_lambda = PriorSpec::custom(CustomPrior {
            label: "zero".into(),
            g: Arc::new(|_, _| 1.0),
            lambda: Arc::new(|t| if t > 1.0 { 0.0 } else { 1.0 }),
            q: Some(Arc::new(|_| 1.0)),
            alpha_smoothness: None,
            time_homogeneous: false,
        });
        let r = check_conditions(&zero_lambda, 2.0, 32).unwrap();
        assert!(!r.pass_a3 && r.pass_a1);

        // g ~ x^(-1/2) near zero: no finite q.
        let no_q = PriorSpec::custom(CustomPrior {
            label: "sqrt".into(),
            g: Arc::new(|_, x: f64| 0.5 / x.sqrt()),
            lambda: Arc::new(|_| 1.0),
            q: None,
            alpha_smoothness: None,
            time_homogeneous: true,
        });
        let r = check_conditions(&no_q, 2.0, 32).unwrap();
        assert_eq!(r.q_source, QSource::Unavailable);
        assert!(!r.pass_a2);
        assert!(r.to_string().contains("q unavailable"));

        // (1 − x) g unbounded near 1: A1 fails under refinement.
        let blowup = PriorSpec::custom(CustomPrior {
            label: "blowup".into(),
            g: Arc::new(|_, x: f64| 0.5 * (1.0 - x).powf(-1.5).min(1e300) / 1.0),
            lambda: Arc::new(|_| 1.0),
            q: Some(Arc::new(|_| 0.5)),
            alpha_smoothness: None,
            time_homogeneous: true,
        });
        let r = check_conditions(&blowup, 2.0, 32).unwrap();
        assert!(!r.pass_a1);

        assert!(check_conditions(&PriorSpec::alpha(1.0).unwrap(), 2.0, 8).is_err());
    }
}
