//! Conjugate posterior update and exact posterior moments.
//!
//! Given data, the posterior Lévy measure is
//! `(1−x)^{Y_n(s)} f_s(x) dx ds` (continuous part) plus one fixed jump at each
//! distinct death time `t_i`, with jump law
//! `dH(x) ∝ x^{ΔN}(1−x)^{Y−ΔN} f_{t_i}(x) dx`.
//!
//! All moment computations reduce to
//! `C_k(t; Y) = ∫₀¹ x^k (1−x)^Y g_t(x) dx`.

use std::sync::{Arc, OnceLock};

use crate::data::{RiskInterval, RiskSummary};
use crate::error::{Error, Result};
use crate::prior::{pow_one_minus, pow_pair, PriorFamily, PriorSpec};
use crate::quadrature::{geometric_breaks, integrate_with_breaks, Tolerance};
use crate::sampling::InversionTable;
use crate::special::{ln_beta, log_add_exp};

/// Highest raw moment cached per jump law.
pub const MAX_CACHED_MOMENT: usize = 4;

/// Mass beyond `u = (Y+1)x = 50` is below `e^{-50}` of the total for the
/// integrands handled here.
const U_CUTOFF: f64 = 50.0;

/// `ln C_k(t; y)` from a closed form, when the family has one.
fn ln_ck_closed(spec: &PriorSpec, t: f64, y: f64, k: f64) -> Option<f64> {
    match spec.family() {
        PriorFamily::Beta { .. } | PriorFamily::Dirichlet { .. } => {
            let c = spec.beta_scale(t)?;
            Some(c.ln() + ln_beta(k + 1.0, y + c))
        }
        PriorFamily::Alpha { alpha } => {
            let w = ((alpha + 1.0) / (alpha + 2.0)).ln();
            Some(w + log_add_exp(ln_beta(k + 1.0, y + 1.0), ln_beta(k + alpha + 1.0, y + 1.0)))
        }
        _ => None,
    }
}

/// `C_k(t; y)` by adaptive quadrature, ignoring any closed form.
///
/// On `x ≤ 1/2` the integral is taken in `u = (y+1)x`, where the integrand is
/// `O(1)` whatever `y`, up to `u = 50 + 4k`; the rest of `[0, 1/2]` is a
/// tail integral in `x`. On `x ≥ 1/2` it is taken in `w = 1 − x` so that a
/// singularity of `g` at one is resolved.
pub fn ck_quadrature(spec: &PriorSpec, t: f64, y: f64, k: f64) -> Result<f64> {
    if !(y >= 0.0 && k >= 0.0) {
        return Err(Error::invalid(format!("C_k needs y >= 0 and k >= 0, got y = {y}, k = {k}")));
    }
    let fail = |e: Error| Error::Quadrature(format!("C_k at t = {t}, y_plus = {y}, k = {k}: {e}"));
    let scale = y + 1.0;
    let u_hi = (0.5 * scale).min(U_CUTOFF + 4.0 * k);
    let head_fn = |u: f64| {
        let x = u / scale;
        let uk = if k == 0.0 { 1.0 } else { u.powf(k) };
        uk * pow_one_minus(x, y) * spec.g(t, x)
    };
    let mut breaks = geometric_breaks(0.0, u_hi.min(1.0), 30);
    for p in [2.0, 5.0, 10.0, 20.0, 35.0] {
        if p < u_hi && p > *breaks.last().unwrap() {
            breaks.push(p);
        }
    }
    if u_hi > *breaks.last().unwrap() {
        breaks.push(u_hi);
    }
    let tol = Tolerance { abs: 1e-300, rel: 1e-13, max_intervals: 8000 };
    let head = integrate_with_breaks(head_fn, &breaks, tol).map_err(fail)? * scale.powf(-(k + 1.0));
    if !(head > 0.0) {
        return Err(Error::Quadrature(format!("C_k at t = {t}, y_plus = {y}, k = {k} evaluated to {head}")));
    }
    let rest_tol = Tolerance { abs: 1e-15 * head, rel: 1e-13, max_intervals: 8000 };
    let x0 = u_hi / scale;
    let middle = if x0 < 0.5 {
        integrate_with_breaks(|x: f64| x.powf(k) * pow_one_minus(x, y) * spec.g(t, x), &[x0, 0.5], rest_tol)
            .map_err(fail)?
    } else {
        0.0
    };
    let upper = integrate_with_breaks(
        |w: f64| {
            let x = 1.0 - w;
            x.powf(k) * pow_pair(x, w, y) * spec.g_split(t, x, w)
        },
        &geometric_breaks(0.0, 0.5, 60),
        rest_tol,
    )
    .map_err(fail)?;
    Ok(head + middle + upper)
}

/// `ln C_k(t; y)`, closed form when available.
pub(crate) fn ln_ck(spec: &PriorSpec, t: f64, y: f64, k: f64) -> Result<f64> {
    if y == 0.0 && k == 0.0 {
        return Ok(0.0);
    }
    if let Some(v) = ln_ck_closed(spec, t, y, k) {
        return Ok(v);
    }
    let v = ck_quadrature(spec, t, y, k)?;
    if !(v > 0.0) {
        return Err(Error::Quadrature(format!("C_k at t = {t}, y_plus = {y}, k = {k} evaluated to {v}")));
    }
    Ok(v.ln())
}

/// `C_k(t) = ∫₀¹ x^k (1−x)^{Y⁺} g_t(x) dx`.
pub fn jump_moment_ck(spec: &PriorSpec, t: f64, y_plus: usize, k: usize) -> Result<f64> {
    Ok(ln_ck(spec, t, y_plus as f64, k as f64)?.exp())
}

/// Exact description of a fixed-jump law, when one exists.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    BetaExact {
        shape1: f64,
        shape2: f64,
    },
    /// Two-component beta mixture; weights sum to one.
    BetaMixture {
        weights: [f64; 2],
        shapes: [(f64, f64); 2],
    },
    Generic,
}

fn beta_raw_moment(a: f64, b: f64, k: usize) -> f64 {
    (0..k).map(|j| (a + j as f64) / (a + b + j as f64)).product()
}

/// Law `H_{t_i}` of the posterior jump at an observed death time.
#[derive(Debug, Clone)]
pub struct JumpLaw {
    location: f64,
    delta_n: usize,
    y: usize,
    y_plus: usize,
    closed_form: ClosedForm,
    /// `E[ΔA^k]` for `k = 0..=4`.
    moments: [f64; MAX_CACHED_MOMENT + 1],
    prior: Arc<PriorSpec>,
    table: Arc<OnceLock<(usize, Arc<InversionTable>)>>,
}

impl JumpLaw {
    /// Builds the jump law for `ΔN` deaths out of `Y` at risk at time `t`.
    pub fn new(prior: Arc<PriorSpec>, location: f64, y: usize, delta_n: usize) -> Result<Self> {
        if delta_n == 0 || delta_n > y {
            return Err(Error::invalid(format!("jump law needs 1 <= ΔN <= Y, got ΔN = {delta_n}, Y = {y}")));
        }
        let y_plus = y - delta_n;
        let dn = delta_n as f64;
        let yp = y_plus as f64;
        let closed_form = match prior.family() {
            PriorFamily::Beta { .. } | PriorFamily::Dirichlet { .. } => {
                let c = prior.beta_scale(location).unwrap_or(0.0);
                if c > 0.0 {
                    ClosedForm::BetaExact { shape1: dn, shape2: yp + c }
                } else {
                    ClosedForm::Generic
                }
            }
            PriorFamily::Alpha { alpha } => {
                let l0 = ln_beta(dn, yp + 1.0);
                let l1 = ln_beta(dn + alpha, yp + 1.0);
                let total = log_add_exp(l0, l1);
                ClosedForm::BetaMixture {
                    weights: [(l0 - total).exp(), (l1 - total).exp()],
                    shapes: [(dn, yp + 1.0), (dn + alpha, yp + 1.0)],
                }
            }
            _ => ClosedForm::Generic,
        };
        let mut moments = [1.0; MAX_CACHED_MOMENT + 1];
        match &closed_form {
            ClosedForm::BetaExact { shape1, shape2 } => {
                for (k, m) in moments.iter_mut().enumerate() {
                    *m = beta_raw_moment(*shape1, *shape2, k);
                }
            }
            ClosedForm::BetaMixture { weights, shapes } => {
                for (k, m) in moments.iter_mut().enumerate() {
                    *m = weights[0] * beta_raw_moment(shapes[0].0, shapes[0].1, k)
                        + weights[1] * beta_raw_moment(shapes[1].0, shapes[1].1, k);
                }
            }
            ClosedForm::Generic => {
                let base = ln_ck(&prior, location, yp, dn - 1.0)?;
                if !base.is_finite() {
                    return Err(Error::Numeric(format!("jump law at t = {location} is not normalizable")));
                }
                for (k, m) in moments.iter_mut().enumerate().skip(1) {
                    *m = (ln_ck(&prior, location, yp, dn - 1.0 + k as f64)? - base).exp();
                }
            }
        }
        Ok(Self { location, delta_n, y, y_plus, closed_form, moments, prior, table: Arc::new(OnceLock::new()) })
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn delta_n(&self) -> usize {
        self.delta_n
    }

    pub fn y(&self) -> usize {
        self.y
    }

    pub fn y_plus(&self) -> usize {
        self.y_plus
    }

    pub fn closed_form(&self) -> &ClosedForm {
        &self.closed_form
    }

    pub fn prior(&self) -> &PriorSpec {
        &self.prior
    }

    /// Unnormalized density `x^{ΔN}(1−x)^{Y−ΔN} f_t(x)`.
    pub fn density(&self, x: f64) -> f64 {
        self.density_split(x, 1.0 - x)
    }

    /// [`JumpLaw::density`] with `y = 1 − x` supplied separately.
    pub fn density_split(&self, x: f64, y: f64) -> f64 {
        let t = self.location;
        let xk = if self.delta_n == 1 { 1.0 } else { x.powi(self.delta_n as i32 - 1) };
        xk * pow_pair(x, y, self.y_plus as f64) * self.prior.g_split(t, x, y) * self.prior.lambda(t)
    }

    /// `E[(ΔA)^k]`; `k ≤ 4` comes from the cache.
    pub fn raw_moment(&self, k: usize) -> Result<f64> {
        if k <= MAX_CACHED_MOMENT {
            return Ok(self.moments[k]);
        }
        let dn = self.delta_n as f64;
        Ok(match &self.closed_form {
            ClosedForm::BetaExact { shape1, shape2 } => beta_raw_moment(*shape1, *shape2, k),
            ClosedForm::BetaMixture { weights, shapes } => {
                weights[0] * beta_raw_moment(shapes[0].0, shapes[0].1, k)
                    + weights[1] * beta_raw_moment(shapes[1].0, shapes[1].1, k)
            }
            ClosedForm::Generic => {
                let yp = self.y_plus as f64;
                (ln_ck(&self.prior, self.location, yp, dn - 1.0 + k as f64)?
                    - ln_ck(&self.prior, self.location, yp, dn - 1.0)?)
                .exp()
            }
        })
    }

    pub fn mean(&self) -> f64 {
        self.moments[1]
    }

    pub fn variance(&self) -> f64 {
        (self.moments[2] - self.moments[1] * self.moments[1]).max(0.0)
    }

    /// Inverse-CDF table over `u = (Y⁺+1)x`, built once per grid size.
    pub(crate) fn inversion_table(&self, points: usize) -> Result<Arc<InversionTable>> {
        if let Some((p, table)) = self.table.get() {
            if *p == points {
                return Ok(Arc::clone(table));
            }
        }
        let table = Arc::new(InversionTable::for_jump_law(self, points)?);
        let _ = self.table.set((points, Arc::clone(&table)));
        Ok(table)
    }
}

/// `E[(ΔA(t_i))^k | data] = C_k/C_0` (general `ΔN` handled by the law).
pub fn jump_raw_moment(law: &JumpLaw, k: usize) -> Result<f64> {
    law.raw_moment(k)
}

/// Posterior of `A`: fixed jumps at death times plus a continuous part.
#[derive(Debug, Clone)]
pub struct PosteriorLaw {
    prior: Arc<PriorSpec>,
    risk: Arc<RiskSummary>,
    fixed_jumps: Vec<JumpLaw>,
}

impl PosteriorLaw {
    pub fn prior(&self) -> &PriorSpec {
        &self.prior
    }

    pub fn prior_arc(&self) -> &Arc<PriorSpec> {
        &self.prior
    }

    pub fn risk(&self) -> &RiskSummary {
        &self.risk
    }

    pub fn fixed_jumps(&self) -> &[JumpLaw] {
        &self.fixed_jumps
    }

    /// Continuous-part Lévy density `(1−x)^{Y_n(s)} f_s(x)`.
    pub fn continuous_density(&self, s: f64, x: f64) -> f64 {
        pow_one_minus(x, self.risk.y_at(s) as f64) * self.prior.levy_density(s, x)
    }

    /// Number of fixed jumps at or before `t`.
    pub fn jumps_up_to(&self, t: f64) -> usize {
        self.fixed_jumps.partition_point(|j| j.location <= t)
    }
}

/// Conjugate update of a prior with a risk summary.
pub fn posterior_update(prior: &PriorSpec, risk: &RiskSummary) -> Result<PosteriorLaw> {
    let prior = Arc::new(prior.clone());
    let fixed_jumps = risk
        .event_times()
        .iter()
        .zip(risk.y())
        .zip(risk.delta_n())
        .map(|((&t, &y), &d)| JumpLaw::new(Arc::clone(&prior), t, y, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(PosteriorLaw { prior, risk: Arc::new(risk.clone()), fixed_jumps })
}

/// Mean and variance of `A_d(t)`, the sum of fixed jumps up to `t`.
pub fn posterior_fixed_moments(post: &PosteriorLaw, t: f64) -> (f64, f64) {
    post.fixed_jumps[..post.jumps_up_to(t)].iter().fold((0.0, 0.0), |(m, v), j| (m + j.mean(), v + j.variance()))
}

/// `(∫ λ C_0, ∫ λ C_1)` over intervals of constant risk-set size: the mean
/// and variance of a subordinator with Lévy density `(1−x)^Y f_s(x)`.
pub(crate) fn levy_moments(spec: &PriorSpec, intervals: &[RiskInterval]) -> Result<(f64, f64)> {
    let mut mean = 0.0;
    let mut var = 0.0;
    for iv in intervals {
        let y = iv.at_risk as f64;
        mean += spec.integrate_in_time(iv.start, iv.end, |s| Ok(ln_ck(spec, s, y, 0.0)?.exp()))?;
        var += spec.integrate_in_time(iv.start, iv.end, |s| Ok(ln_ck(spec, s, y, 1.0)?.exp()))?;
    }
    Ok((mean, var))
}

/// Mean and variance of `A(t) − A_d(t)`.
pub fn continuous_part_moments(post: &PosteriorLaw, t: f64) -> Result<(f64, f64)> {
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("time must be >= 0, got {t}")));
    }
    levy_moments(&post.prior, &post.risk.constant_risk_intervals(t))
}

/// Mean and variance of the whole posterior `A(t)`.
pub fn posterior_moments(post: &PosteriorLaw, t: f64) -> Result<(f64, f64)> {
    let (fm, fv) = posterior_fixed_moments(post, t);
    let (cm, cv) = continuous_part_moments(post, t)?;
    Ok((fm + cm, fv + cv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Dataset;
    use crate::prior::prior_moments;
    use crate::special::beta;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn risk(pairs: &[(f64, bool)]) -> RiskSummary {
        RiskSummary::from_dataset(&Dataset::from_pairs(pairs).unwrap()).unwrap()
    }

    #[test]
    fn ck_examples() {
        let b = PriorSpec::beta(1.0, 1.0).unwrap();
        assert!(rel(jump_moment_ck(&b, 0.0, 9, 1).unwrap(), 1.0 / 110.0) < 1e-13);
        assert!(rel(ck_quadrature(&b, 0.0, 9.0, 1.0).unwrap(), 1.0 / 110.0) < 1e-10);
        for spec in [PriorSpec::alpha(0.3).unwrap(), PriorSpec::gamma(2.0, 1.0).unwrap(), b] {
            assert_eq!(jump_moment_ck(&spec, 0.5, 0, 0).unwrap(), 1.0);
        }
        let a = PriorSpec::alpha(0.5).unwrap();
        let closed = jump_moment_ck(&a, 0.0, 100, 1).unwrap();
        let oracle = {
            // B_α(s) = Γ(α+1)Γ(Y⁺+1)/Γ(Y⁺+α+2) in its integral form
            let w = 1.5 / 2.5;
            w * (beta(2.0, 101.0) + beta(2.5, 101.0))
        };
        assert!(rel(closed, oracle) < 1e-12);
        assert!(rel(ck_quadrature(&a, 0.0, 100.0, 1.0).unwrap(), oracle) < 1e-8);
    }

    #[test]
    fn ck_gamma_quadrature_large_y() {
        let g = PriorSpec::gamma(1.0, 1.0).unwrap();
        let c = gamma_normalizer_for(&g);
        // For large Y, C_k ≈ q Γ(k+1)/(Y+1)^(k+1) with q = c.
        let y = 1e5;
        let v = ck_quadrature(&g, 0.0, y, 1.0).unwrap();
        assert!(rel(v * (y + 1.0).powi(2), c) < 1e-3, "{v}");
    }

    fn gamma_normalizer_for(spec: &PriorSpec) -> f64 {
        spec.q(0.0).unwrap()
    }

    #[test]
    fn beta_update_closed_form() {
        let prior = PriorSpec::beta(1.0, 1.0).unwrap();
        let pairs: Vec<(f64, bool)> = (1..=10).map(|i| (i as f64, i == 1)).collect();
        let post = posterior_update(&prior, &risk(&pairs)).unwrap();
        let law = &post.fixed_jumps()[0];
        assert_eq!(law.closed_form(), &ClosedForm::BetaExact { shape1: 1.0, shape2: 10.0 });
        assert!(rel(jump_raw_moment(law, 1).unwrap(), 1.0 / 11.0) < 1e-15);
        assert_eq!(jump_raw_moment(law, 0).unwrap(), 1.0);
        let (m, v) = posterior_fixed_moments(&post, 1.0);
        assert!(rel(m, 1.0 / 11.0) < 1e-15);
        assert!(rel(v, 10.0 / (121.0 * 12.0)) < 1e-13);
        assert!((v - 0.006887).abs() < 1e-6);
        assert_eq!(posterior_fixed_moments(&post, 0.5), (0.0, 0.0));
        // normalization of (1−x)^9 density by quadrature
        let z = integrate_with_breaks(|x| law.density(x), &[0.0, 0.1, 1.0], Tolerance::default()).unwrap();
        assert!(rel(z, 0.1) < 1e-10);
    }

    #[test]
    fn uniform_jump_law() {
        let prior = PriorSpec::beta(1.0, 1.0).unwrap();
        let post = posterior_update(&prior, &risk(&[(1.0, true)])).unwrap();
        assert!((post.fixed_jumps()[0].mean() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn alpha_update_mixture_weights() {
        let prior = PriorSpec::alpha(1.0).unwrap();
        let pairs: Vec<(f64, bool)> = (1..=5).map(|i| (i as f64, i == 1)).collect();
        let post = posterior_update(&prior, &risk(&pairs)).unwrap();
        match post.fixed_jumps()[0].closed_form() {
            ClosedForm::BetaMixture { weights, shapes } => {
                assert!((weights[0] - 6.0 / 7.0).abs() < 1e-14);
                assert!((weights[1] - 1.0 / 7.0).abs() < 1e-14);
                assert_eq!(shapes, &[(1.0, 5.0), (2.0, 5.0)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn alpha_fixed_mean_matches_beta_ratio() {
        // One event with Y⁺ = 5: mean = (B(2,6)+B(3,6))/(B(1,6)+B(2,6)).
        let prior = PriorSpec::alpha(1.0).unwrap();
        let pairs: Vec<(f64, bool)> = (1..=6).map(|i| (i as f64, i == 1)).collect();
        let post = posterior_update(&prior, &risk(&pairs)).unwrap();
        let (m, _) = posterior_fixed_moments(&post, 1.0);
        let oracle = (beta(2.0, 6.0) + beta(3.0, 6.0)) / (beta(1.0, 6.0) + beta(2.0, 6.0));
        assert!((m - oracle).abs() < 1e-10);
        let quad = ck_quadrature(&prior, 1.0, 5.0, 1.0).unwrap() / ck_quadrature(&prior, 1.0, 5.0, 0.0).unwrap();
        assert!((quad - oracle).abs() < 1e-10);
    }

    #[test]
    fn ties_use_general_exponent() {
        let prior = PriorSpec::beta(2.0, 1.0).unwrap();
        let post = posterior_update(&prior, &risk(&[(1.0, true), (1.0, true), (2.0, false)])).unwrap();
        assert_eq!(post.fixed_jumps()[0].closed_form(), &ClosedForm::BetaExact { shape1: 2.0, shape2: 3.0 });
        // Generic path agrees with the closed form for the same shape.
        let g = PriorSpec::gamma(1.5, 1.0).unwrap();
        let post = posterior_update(&g, &risk(&[(1.0, true), (1.0, true), (2.0, false)])).unwrap();
        let law = &post.fixed_jumps()[0];
        let z =
            integrate_with_breaks(|x| law.density(x), &geometric_breaks(0.0, 1.0, 30), Tolerance::default()).unwrap();
        let m1 = integrate_with_breaks(|x| x * law.density(x), &geometric_breaks(0.0, 1.0, 30), Tolerance::default())
            .unwrap()
            / z;
        assert!(rel(law.mean(), m1) < 1e-8);
    }

    #[test]
    fn moments_are_decreasing() {
        for prior in
            [PriorSpec::gamma(0.7, 1.0).unwrap(), PriorSpec::alpha(0.25).unwrap(), PriorSpec::beta(0.5, 1.0).unwrap()]
        {
            for y in [1usize, 2, 10, 300] {
                let law = JumpLaw::new(Arc::new(prior.clone()), 0.3, y, 1).unwrap();
                for k in 0..MAX_CACHED_MOMENT {
                    assert!(law.raw_moment(k).unwrap() >= law.raw_moment(k + 1).unwrap());
                }
                assert!(law.raw_moment(6).unwrap() < law.raw_moment(4).unwrap());
            }
        }
    }

    #[test]
    fn monotone_shrinkage() {
        for prior in [
            PriorSpec::beta(1.0, 1.0).unwrap(),
            PriorSpec::dirichlet(3.0, 1.0).unwrap(),
            PriorSpec::gamma(1.0, 1.0).unwrap(),
            PriorSpec::alpha(0.5).unwrap(),
        ] {
            let mut prev = f64::INFINITY;
            for y in [0usize, 1, 2, 5, 10, 100, 1000] {
                let m = (jump_moment_ck(&prior, 0.5, y, 1).unwrap()) / jump_moment_ck(&prior, 0.5, y, 0).unwrap();
                assert!(m < prev, "{} y={y}", prior.label());
                prev = m;
            }
        }
    }

    #[test]
    fn empty_data_posterior_is_prior() {
        for prior in [
            PriorSpec::beta(2.0, 1.0).unwrap(),
            PriorSpec::dirichlet(2.0, 0.5).unwrap(),
            PriorSpec::alpha(0.5).unwrap(),
        ] {
            let post = posterior_update(&prior, &RiskSummary::empty()).unwrap();
            assert!(post.fixed_jumps().is_empty());
            for &t in &[0.0, 0.5, 2.0] {
                assert_eq!(continuous_part_moments(&post, t).unwrap(), prior_moments(&prior, t).unwrap());
                assert_eq!(posterior_moments(&post, t).unwrap(), prior_moments(&prior, t).unwrap());
            }
            assert_eq!(post.continuous_density(1.0, 0.3), prior.levy_density(1.0, 0.3));
        }
    }

    #[test]
    fn continuous_part_constant_risk() {
        // Y ≡ m on [0, t] (everyone observed after t): mean = t/(m+1) for c = λ = 1.
        let m = 7;
        let pairs: Vec<(f64, bool)> = (0..m).map(|i| (5.0 + i as f64, true)).collect();
        let post = posterior_update(&PriorSpec::beta(1.0, 1.0).unwrap(), &risk(&pairs)).unwrap();
        let (mean, var) = continuous_part_moments(&post, 2.0).unwrap();
        assert!(rel(mean, 2.0 / (m as f64 + 1.0)) < 1e-13);
        assert!(rel(var, 2.0 * beta(2.0, m as f64 + 1.0)) < 1e-13);
    }

    #[test]
    fn continuous_mean_respects_bound() {
        use crate::prior::check_conditions;
        let pairs: Vec<(f64, bool)> = (1..=40).map(|i| (0.05 * i as f64, i % 3 != 0)).collect();
        let r = risk(&pairs);
        for prior in
            [PriorSpec::alpha(0.5).unwrap(), PriorSpec::gamma(2.0, 1.0).unwrap(), PriorSpec::beta(3.0, 1.0).unwrap()]
        {
            let post = posterior_update(&prior, &r).unwrap();
            let t = 1.5;
            let (mean, _) = continuous_part_moments(&post, t).unwrap();
            let g_star = check_conditions(&prior, t, 64).unwrap().a1_sup_refined;
            let bound = g_star * prior.lambda(0.0) * t * beta(1.0, r.y_at(t) as f64);
            assert!(mean <= bound, "{}: {mean} > {bound}", prior.label());
        }
    }

    #[test]
    fn invalid_jump_law() {
        let p = Arc::new(PriorSpec::beta(1.0, 1.0).unwrap());
        assert!(JumpLaw::new(Arc::clone(&p), 1.0, 3, 0).is_err());
        assert!(JumpLaw::new(p, 1.0, 3, 4).is_err());
    }
}
