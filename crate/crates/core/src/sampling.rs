//! Posterior sample paths of the cumulative hazard.
//!
//! Fixed jumps are drawn from their exact laws (beta or beta mixture) when the
//! family allows it and by tabulated inversion otherwise. The continuous part
//! is simulated above a truncation level `ε` by thinning a Poisson process
//! driven by the prior intensity, keeping a proposal `(s, x)` with probability
//! `(1−x)^{Y_n(s)}`. The mass below `ε` can be added back as a deterministic
//! drift.

use std::sync::Arc;

use rand::Rng;
use rand_distr::{Beta, Distribution, Poisson};

use crate::data::RiskSummary;
use crate::error::{Error, Result};
use crate::posterior::{ClosedForm, JumpLaw, PosteriorLaw};
use crate::prior::{pow_one_minus, PriorSpec};
use crate::quadrature::{gauss_legendre4, geometric_breaks, integrate_with_breaks, Tolerance};

/// Default resolution of the generic inversion grid.
pub const DEFAULT_INVERSION_GRID: usize = 512;

/// No grid cell may carry more than this share of the mass.
const MAX_CELL_SHARE: f64 = 1.0 / 64.0;

/// Time cells used for priors whose jump-size law changes with time.
const TIME_CELLS: usize = 256;

/// Cells of the `ln x` grid for continuous-part proposals.
const LOG_CELLS: usize = 128;

/// Sampler settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    /// Truncation level for continuous-part jumps; `None` picks
    /// `10⁻⁶/(max Y_n + 1)`. `Some(1.0)` switches the continuous jumps off.
    pub epsilon: Option<f64>,
    pub draws: usize,
    pub seed: u64,
    pub compensate_mean: bool,
    pub inversion_grid: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { epsilon: None, draws: 1000, seed: 0, compensate_mean: true, inversion_grid: DEFAULT_INVERSION_GRID }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps <= 1.0) {
                return Err(Error::invalid(format!("epsilon must lie in (0, 1], got {eps}")));
            }
        }
        if self.draws == 0 {
            return Err(Error::invalid("draws must be at least 1"));
        }
        if self.inversion_grid < 2 {
            return Err(Error::invalid(format!("inversion grid needs at least 2 points, got {}", self.inversion_grid)));
        }
        Ok(())
    }

    /// The truncation level actually used for `risk`.
    pub fn effective_epsilon(&self, risk: &RiskSummary) -> f64 {
        self.epsilon.unwrap_or_else(|| default_epsilon(risk))
    }

    /// The continuous part contributes nothing at all.
    pub fn continuous_disabled(&self) -> bool {
        self.epsilon == Some(1.0) && !self.compensate_mean
    }
}

pub fn default_epsilon(risk: &RiskSummary) -> f64 {
    1e-6 / (risk.n() as f64 + 1.0)
}

/// Deterministic piecewise-linear drift, given by its values at knots.
#[derive(Debug, Clone, PartialEq)]
pub struct Compensator {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl Compensator {
    /// Knots must be increasing, values nondecreasing.
    pub fn from_parts(knots: Vec<f64>, values: Vec<f64>) -> Self {
        Self { knots, values }
    }

    pub fn value_at(&self, t: f64) -> f64 {
        if self.knots.is_empty() || t <= self.knots[0] {
            return 0.0;
        }
        let k = self.knots.partition_point(|&s| s <= t);
        if k >= self.knots.len() {
            return *self.values.last().unwrap();
        }
        let (t0, t1) = (self.knots[k - 1], self.knots[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    pub fn total(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

/// A sampled cumulative hazard: jumps plus an optional continuous drift.
#[derive(Debug, Clone, PartialEq)]
pub struct HazardPath {
    jumps: Vec<(f64, f64)>,
    drift: Option<Arc<Compensator>>,
}

impl HazardPath {
    /// Checks sizes in `(0, 1]` and sorts by time.
    pub fn new(mut jumps: Vec<(f64, f64)>) -> Result<Self> {
        for &(t, x) in &jumps {
            if !(x > 0.0 && x <= 1.0) {
                return Err(Error::invalid(format!("jump of size {x} at time {t} outside (0, 1]")));
            }
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::invalid(format!("jump time {t} is not a finite nonnegative number")));
            }
        }
        jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self { jumps, drift: None })
    }

    pub fn empty() -> Self {
        Self { jumps: Vec::new(), drift: None }
    }

    pub fn with_drift(mut self, drift: Option<Arc<Compensator>>) -> Self {
        self.drift = drift;
        self
    }

    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    pub fn drift(&self) -> Option<&Compensator> {
        self.drift.as_deref()
    }

    pub fn drift_at(&self, t: f64) -> f64 {
        self.drift.as_ref().map_or(0.0, |d| d.value_at(t))
    }

    /// `A(t)`.
    pub fn value_at(&self, t: f64) -> f64 {
        let k = self.jumps.partition_point(|j| j.0 <= t);
        self.jumps[..k].iter().map(|j| j.1).sum::<f64>() + self.drift_at(t)
    }
}

/// Piecewise-linear density on a grid with exact cell masses.
#[derive(Debug, Clone)]
pub(crate) struct PiecewiseTable {
    knots: Vec<f64>,
    /// Density at each knot; NaN where it is not finite (endpoints only).
    dens: Vec<f64>,
    /// Normalized cumulative mass at each knot.
    cum: Vec<f64>,
    total: f64,
}

impl PiecewiseTable {
    /// Tabulates `f` on `knots`, splitting cells that carry more than
    /// `1/64` of the mass. `f(x, r)` receives `r = end − x` computed without
    /// cancellation, `end` being the last knot. `fail` builds the error for a
    /// non-finite interior value.
    fn build<F, E>(f: F, knots: Vec<f64>, fail: E) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64,
        E: Fn(String) -> Error,
    {
        let n = knots.len();
        let end = knots[n - 1];
        let eval = |x: f64, interior: bool| -> Result<f64> {
            let v = f(x, end - x);
            if v.is_finite() && v >= 0.0 {
                Ok(v)
            } else if !interior && (v == f64::INFINITY || v.is_nan()) {
                Ok(f64::NAN)
            } else {
                Err(fail(format!("density is {v} at {x}")))
            }
        };
        let cell_mass = |a: f64, b: f64, fa: f64, fb: f64| -> Result<f64> {
            let tol = Tolerance { abs: 1e-300, rel: 1e-10, max_intervals: 600 };
            let r = if fa.is_nan() {
                singular_mass(|d| f(a + d, end - a - d), b - a, 40, tol)
            } else if fb.is_nan() {
                // Reflect so the singular end sits at zero.
                let gap = end - b;
                singular_mass(|d| f(b - d, gap + d), b - a, 60, tol)
            } else {
                integrate_with_breaks(|x| f(x, end - x), &[a, b], tol)
            };
            r.map_err(|e| fail(e.to_string()))
        };

        let mut cells: Vec<(f64, f64, f64, f64, f64)> = Vec::with_capacity(n);
        let mut dens_at: Vec<f64> = Vec::with_capacity(n);
        for (i, &x) in knots.iter().enumerate() {
            dens_at.push(eval(x, i > 0 && i + 1 < n)?);
        }
        for i in 0..n - 1 {
            let (a, b, fa, fb) = (knots[i], knots[i + 1], dens_at[i], dens_at[i + 1]);
            cells.push((a, b, fa, fb, cell_mass(a, b, fa, fb)?));
        }
        let total: f64 = cells.iter().map(|c| c.4).sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(fail(format!("total mass {total} is not positive and finite")));
        }
        let limit = total * MAX_CELL_SHARE;
        let mut refined = Vec::with_capacity(cells.len() * 2);
        let mut stack: Vec<(f64, f64, f64, f64, f64, u32)> =
            cells.into_iter().rev().map(|c| (c.0, c.1, c.2, c.3, c.4, 0)).collect();
        while let Some((a, b, fa, fb, m, depth)) = stack.pop() {
            let mid = 0.5 * (a + b);
            if m <= limit || depth >= 30 || mid <= a || mid >= b {
                refined.push((a, b, fa, fb, m));
                continue;
            }
            let fm = eval(mid, true)?;
            let m2 = cell_mass(mid, b, fm, fb)?;
            let m1 = cell_mass(a, mid, fa, fm)?;
            stack.push((mid, b, fm, fb, m2, depth + 1));
            stack.push((a, mid, fa, fm, m1, depth + 1));
        }
        let total: f64 = refined.iter().map(|c| c.4).sum();
        let mut out_knots = Vec::with_capacity(refined.len() + 1);
        let mut dens = Vec::with_capacity(refined.len() + 1);
        let mut cum = Vec::with_capacity(refined.len() + 1);
        out_knots.push(refined[0].0);
        dens.push(refined[0].2);
        cum.push(0.0);
        let mut acc = 0.0;
        for c in &refined {
            acc += c.4;
            out_knots.push(c.1);
            dens.push(c.3);
            cum.push(acc / total);
        }
        *cum.last_mut().unwrap() = 1.0;
        Ok(Self { knots: out_knots, dens, cum, total })
    }

    pub(crate) fn total(&self) -> f64 {
        self.total
    }

    pub(crate) fn cells(&self) -> usize {
        self.knots.len() - 1
    }

    /// Inverse CDF at `p ∈ [0, 1)`.
    pub(crate) fn quantile(&self, p: f64) -> f64 {
        let i = (self.cum.partition_point(|&c| c <= p).max(1) - 1).min(self.cells() - 1);
        let (c0, c1) = (self.cum[i], self.cum[i + 1]);
        let (a, b) = (self.knots[i], self.knots[i + 1]);
        let frac = if c1 > c0 { ((p - c0) / (c1 - c0)).clamp(0.0, 1.0) } else { 0.5 };
        let (fa, fb) = (self.dens[i], self.dens[i + 1]);
        let s = if !(fa.is_finite() && fb.is_finite()) || fa + fb <= 0.0 {
            frac
        } else {
            // Solve fa·s + (fb−fa)s²/2 = frac·(fa+fb)/2 for s ∈ [0, 1].
            let r2 = frac * (fa + fb);
            if r2 == 0.0 {
                0.0
            } else {
                r2 / (fa + (fa * fa + (fb - fa) * r2).max(0.0).sqrt())
            }
        };
        a + (b - a) * s.clamp(0.0, 1.0)
    }
}

/// `∫₀^len h`, where `h` may be singular at zero. The innermost of `levels`
/// geometric cells is integrated from a local power-law fit `h(d) ≈ A·d^p`.
fn singular_mass(h: impl Fn(f64) -> f64, len: f64, levels: usize, tol: Tolerance) -> Result<f64> {
    let breaks = geometric_breaks(0.0, len, levels);
    let d0 = breaks[1];
    let (h1, h2) = (h(d0), h(0.5 * d0));
    let p = (h1 / h2).log2();
    let head = if h1 > 0.0 && h2 > 0.0 && h1.is_finite() && h2.is_finite() && p > -1.0 {
        h1 * d0 / (p + 1.0)
    } else if h1 == 0.0 && h2 == 0.0 {
        0.0
    } else {
        return Err(Error::Quadrature(format!("density is not integrable near the endpoint (local exponent {p})")));
    };
    Ok(head + integrate_with_breaks(&h, &breaks[1..], tol)?)
}

/// Inverse-CDF table of a generic jump law over `u = (Y⁺+1)x`.
#[derive(Debug, Clone)]
pub struct InversionTable {
    table: PiecewiseTable,
    scale: f64,
}

impl InversionTable {
    pub(crate) fn for_jump_law(law: &JumpLaw, points: usize) -> Result<Self> {
        let time = law.location();
        if points < 2 {
            return Err(Error::Inversion { time, reason: format!("grid of {points} point(s) cannot be inverted") });
        }
        let scale = law.y_plus() as f64 + 1.0;
        let dn = law.delta_n() as f64;
        let upper = scale.min(dn - 1.0 + 60.0 + 10.0 * dn.sqrt());
        let whole = upper >= scale;
        let mut knots: Vec<f64> = (0..points)
            .map(|j| {
                let s = j as f64 / (points - 1) as f64;
                let w = if whole { s * s * (3.0 - 2.0 * s) } else { s * s };
                upper * w
            })
            .collect();
        knots.dedup();
        if knots.len() < 2 {
            return Err(Error::Inversion { time, reason: "grid collapsed".into() });
        }
        let table = PiecewiseTable::build(
            |u, r| law.density_split((u / scale).min(1.0), ((scale - upper + r) / scale).max(0.0)),
            knots,
            |reason| Error::Inversion { time, reason },
        )?;
        Ok(Self { table, scale })
    }

    /// Jump size at probability level `p`.
    pub fn quantile(&self, p: f64) -> f64 {
        (self.table.quantile(p) / self.scale).min(1.0)
    }

    pub fn cells(&self) -> usize {
        self.table.cells()
    }
}

/// `Beta(1, b)` by inversion.
#[inline]
fn beta_one<R: Rng + ?Sized>(b: f64, rng: &mut R) -> f64 {
    let u: f64 = 1.0 - rng.random::<f64>();
    -(u.ln() / b).exp_m1()
}

/// A jump law prepared for repeated draws.
#[derive(Debug, Clone)]
enum JumpDraw {
    BetaOne(f64),
    Beta(Beta<f64>),
    Mixture { w0: f64, first: Box<JumpDraw>, second: Box<JumpDraw> },
    Table(Arc<InversionTable>),
}

impl JumpDraw {
    fn beta(a: f64, b: f64) -> Result<Self> {
        if a == 1.0 {
            return Ok(Self::BetaOne(b));
        }
        Beta::new(a, b).map(Self::Beta).map_err(|e| Error::invalid(format!("Beta({a}, {b}): {e}")))
    }

    fn prepare(law: &JumpLaw, grid: usize) -> Result<Self> {
        match law.closed_form() {
            ClosedForm::BetaExact { shape1, shape2 } => Self::beta(*shape1, *shape2),
            ClosedForm::BetaMixture { weights, shapes } => Ok(Self::Mixture {
                w0: weights[0],
                first: Box::new(Self::beta(shapes[0].0, shapes[0].1)?),
                second: Box::new(Self::beta(shapes[1].0, shapes[1].1)?),
            }),
            ClosedForm::Generic => Ok(Self::Table(law.inversion_table(grid)?)),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let x = match self {
                Self::BetaOne(b) => beta_one(*b, rng),
                Self::Beta(d) => d.sample(rng),
                Self::Mixture { w0, first, second } => {
                    if rng.random::<f64>() < *w0 {
                        first.sample(rng)
                    } else {
                        second.sample(rng)
                    }
                }
                Self::Table(t) => t.quantile(rng.random::<f64>()),
            };
            if x > 0.0 && x <= 1.0 {
                return x;
            }
        }
    }
}

/// One draw from `H_{t_i}` using the default inversion grid.
pub fn sample_jump<R: Rng + ?Sized>(law: &JumpLaw, rng: &mut R) -> Result<f64> {
    sample_jump_with_grid(law, DEFAULT_INVERSION_GRID, rng)
}

pub fn sample_jump_with_grid<R: Rng + ?Sized>(law: &JumpLaw, grid: usize, rng: &mut R) -> Result<f64> {
    Ok(JumpDraw::prepare(law, grid)?.sample(rng))
}

/// One draw of `A_d`: an independent jump at every death time.
pub fn sample_fixed_part<R: Rng + ?Sized>(post: &PosteriorLaw, rng: &mut R) -> Result<HazardPath> {
    let draws =
        post.fixed_jumps().iter().map(|l| JumpDraw::prepare(l, DEFAULT_INVERSION_GRID)).collect::<Result<Vec<_>>>()?;
    let jumps = post.fixed_jumps().iter().zip(&draws).map(|(l, d)| (l.location(), d.sample(rng))).collect();
    HazardPath::new(jumps)
}

/// Thinning sampler for the continuous part on `[0, τ]`.
#[derive(Debug, Clone)]
pub struct ContinuousSampler {
    risk: Arc<RiskSummary>,
    /// `(start, end, table of λ(s)·g_s(eᵛ) over v = ln x)`.
    cells: Vec<(f64, f64, Arc<PiecewiseTable>)>,
    cum_mass: Vec<f64>,
    poisson: Option<Poisson<f64>>,
    compensator: Option<Arc<Compensator>>,
    epsilon: f64,
}

fn log_grid(epsilon: f64) -> Vec<f64> {
    let lo = epsilon.ln();
    let h = -lo / LOG_CELLS as f64;
    let mut knots: Vec<f64> = (0..LOG_CELLS).map(|i| lo + h * i as f64).collect();
    // Approach v = 0 geometrically, where g may be singular.
    knots.extend((1..=30).map(|k| -h * 0.5f64.powi(k - 1)));
    knots.push(0.0);
    knots.dedup();
    knots
}

/// `∫₀^ε (1−x)^m g_s(x) dx`.
fn small_jump_mass(prior: &PriorSpec, s: f64, m: f64, epsilon: f64) -> f64 {
    geometric_breaks(0.0, epsilon, 12)
        .windows(2)
        .map(|w| gauss_legendre4(|x| pow_one_minus(x, m) * prior.g(s, x), w[0], w[1]))
        .sum()
}

impl ContinuousSampler {
    pub fn new(post: &PosteriorLaw, tau: f64, cfg: &SamplerConfig) -> Result<Self> {
        cfg.validate()?;
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::invalid(format!("horizon must be finite and >= 0, got {tau}")));
        }
        let prior = post.prior();
        let risk = Arc::new(post.risk().clone());
        let epsilon = cfg.effective_epsilon(&risk);

        let mut cells = Vec::new();
        if epsilon < 1.0 && tau > 0.0 {
            let knots = log_grid(epsilon);
            let table_at = |s: f64| -> Result<PiecewiseTable> {
                let lambda = prior.lambda(s);
                PiecewiseTable::build(
                    |v, r| lambda * prior.g_split(s, v.exp(), -(-r).exp_m1()),
                    knots.clone(),
                    |r| Error::Numeric(format!("continuous-part intensity at time {s}: {r}")),
                )
            };
            if prior.is_time_homogeneous() {
                if prior.lambda(0.0) > 0.0 {
                    cells.push((0.0, tau, Arc::new(table_at(0.0)?)));
                }
            } else {
                let w = tau / TIME_CELLS as f64;
                for i in 0..TIME_CELLS {
                    let (a, b) = (w * i as f64, if i + 1 == TIME_CELLS { tau } else { w * (i + 1) as f64 });
                    let mid = 0.5 * (a + b);
                    if prior.lambda(mid) > 0.0 {
                        cells.push((a, b, Arc::new(table_at(mid)?)));
                    }
                }
            }
        }
        let mut cum_mass = Vec::with_capacity(cells.len());
        let mut acc = 0.0;
        for (a, b, t) in &cells {
            acc += (b - a) * t.total();
            cum_mass.push(acc);
        }
        let poisson = if acc > 0.0 {
            Some(Poisson::new(acc).map_err(|e| Error::Numeric(format!("Poisson mean {acc}: {e}")))?)
        } else {
            None
        };

        let compensator = if cfg.compensate_mean && tau > 0.0 {
            let mut knots = vec![0.0];
            let mut values = vec![0.0];
            let mut acc = 0.0;
            let homogeneous = prior.is_time_homogeneous();
            let mut base: Option<(f64, f64)> = None;
            for iv in risk.constant_risk_intervals(tau) {
                let m = iv.at_risk as f64;
                let pieces = if homogeneous {
                    1
                } else {
                    (((iv.end - iv.start) / tau * TIME_CELLS as f64).ceil() as usize).max(1)
                };
                let w = (iv.end - iv.start) / pieces as f64;
                for p in 0..pieces {
                    let (a, b) = (iv.start + w * p as f64, iv.start + w * (p + 1) as f64);
                    let mid = 0.5 * (a + b);
                    let rate = if m * epsilon <= 1e-4 {
                        // (1−x)^m = 1 − m x + O((mε)²) below ε.
                        let (g0, g1) = match base {
                            Some(v) if homogeneous => v,
                            _ => {
                                let v = (
                                    small_jump_mass(prior, mid, 0.0, epsilon),
                                    geometric_breaks(0.0, epsilon, 12)
                                        .windows(2)
                                        .map(|w| gauss_legendre4(|x| x * prior.g(mid, x), w[0], w[1]))
                                        .sum(),
                                );
                                base = Some(v);
                                v
                            }
                        };
                        g0 - m * g1
                    } else {
                        small_jump_mass(prior, mid, m, epsilon)
                    };
                    acc += prior.lambda(mid) * rate * (b - a);
                    knots.push(b);
                    values.push(acc);
                }
            }
            if !acc.is_finite() {
                return Err(Error::Numeric("continuous-part compensator is not finite".into()));
            }
            Some(Arc::new(Compensator { knots, values }))
        } else {
            None
        };

        Ok(Self { risk, cells, cum_mass, poisson, compensator, epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Expected number of proposals per draw.
    pub fn proposal_mass(&self) -> f64 {
        self.cum_mass.last().copied().unwrap_or(0.0)
    }

    pub fn compensator(&self) -> Option<&Arc<Compensator>> {
        self.compensator.as_ref()
    }

    /// Calls `keep(time, size)` for every accepted jump, in no particular order.
    fn for_each_jump<R: Rng + ?Sized>(&self, rng: &mut R, mut keep: impl FnMut(f64, f64)) {
        let Some(poisson) = &self.poisson else { return };
        let count = poisson.sample(rng) as u64;
        let total = self.proposal_mass();
        for _ in 0..count {
            let r = rng.random::<f64>() * total;
            let i = self.cum_mass.partition_point(|&c| c <= r).min(self.cells.len() - 1);
            let (a, b, table) = &self.cells[i];
            let s = a + (b - a) * rng.random::<f64>();
            let x = table.quantile(rng.random::<f64>()).exp().clamp(self.epsilon, 1.0);
            let keep_prob = pow_one_minus(x, self.risk.y_at(s) as f64);
            if rng.random::<f64>() < keep_prob && s > 0.0 {
                keep(s, x);
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<HazardPath> {
        let mut jumps = Vec::new();
        self.for_each_jump(rng, |s, x| jumps.push((s, x)));
        Ok(HazardPath::new(jumps)?.with_drift(self.compensator.clone()))
    }

    /// Continuous mass up to `t`, drift included.
    pub fn sample_mass_up_to<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> f64 {
        let mut mass = 0.0;
        self.for_each_jump(rng, |s, x| {
            if s <= t {
                mass += x
            }
        });
        mass + self.compensator.as_ref().map_or(0.0, |c| c.value_at(t))
    }
}

/// One draw of `A − A_d` on `[0, τ]`.
pub fn sample_continuous_part<R: Rng + ?Sized>(
    post: &PosteriorLaw,
    tau: f64,
    cfg: &SamplerConfig,
    rng: &mut R,
) -> Result<HazardPath> {
    ContinuousSampler::new(post, tau, cfg)?.sample(rng)
}

/// Reusable sampler for full posterior paths on `[0, τ]`.
#[derive(Debug, Clone)]
pub struct PathSampler {
    tau: f64,
    locations: Vec<f64>,
    fixed: Vec<JumpDraw>,
    continuous: Option<ContinuousSampler>,
}

impl PathSampler {
    pub fn new(post: &PosteriorLaw, tau: f64, cfg: &SamplerConfig) -> Result<Self> {
        Self::with_continuous(post, tau, cfg, true)
    }

    /// `include_continuous = false` keeps only the fixed jumps.
    pub fn with_continuous(
        post: &PosteriorLaw,
        tau: f64,
        cfg: &SamplerConfig,
        include_continuous: bool,
    ) -> Result<Self> {
        cfg.validate()?;
        let laws = &post.fixed_jumps()[..post.jumps_up_to(tau)];
        let fixed = laws.iter().map(|l| JumpDraw::prepare(l, cfg.inversion_grid)).collect::<Result<Vec<_>>>()?;
        let continuous = if include_continuous && !cfg.continuous_disabled() {
            Some(ContinuousSampler::new(post, tau, cfg)?)
        } else {
            None
        };
        Ok(Self { tau, locations: laws.iter().map(|l| l.location()).collect(), fixed, continuous })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn continuous(&self) -> Option<&ContinuousSampler> {
        self.continuous.as_ref()
    }

    pub fn sample_path<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<HazardPath> {
        let mut jumps: Vec<(f64, f64)> =
            self.locations.iter().zip(&self.fixed).map(|(&t, d)| (t, d.sample(rng))).collect();
        let mut drift = None;
        if let Some(c) = &self.continuous {
            c.for_each_jump(rng, |s, x| jumps.push((s, x)));
            drift = c.compensator.clone();
        }
        Ok(HazardPath::new(jumps)?.with_drift(drift))
    }

    /// `A(t)` for one draw, without building the path.
    pub fn sample_value_at<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> f64 {
        let k = self.locations.partition_point(|&s| s <= t);
        let mut a: f64 = self.fixed[..k].iter().map(|d| d.sample(rng)).sum();
        // Keep the stream aligned with full-path draws.
        for d in &self.fixed[k..] {
            d.sample(rng);
        }
        if let Some(c) = &self.continuous {
            a += c.sample_mass_up_to(t, rng);
        }
        a
    }
}

/// One posterior draw of `A` on `[0, τ]`.
pub fn sample_chf_path<R: Rng + ?Sized>(
    post: &PosteriorLaw,
    tau: f64,
    cfg: &SamplerConfig,
    rng: &mut R,
) -> Result<HazardPath> {
    PathSampler::new(post, tau, cfg)?.sample_path(rng)
}

/// Type-7 sample quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let m = sorted.len();
    let h = (m - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(m - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Equal-tailed interval from empirical quantiles.
pub fn credible_interval(values: &[f64], level: f64) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::invalid("credible interval of an empty sample"));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid(format!("level must lie in (0,1), got {level}")));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::Numeric("credible interval of a sample containing NaN".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let tail = 0.5 * (1.0 - level);
    Ok((quantile_sorted(&sorted, tail), quantile_sorted(&sorted, 1.0 - tail)))
}
