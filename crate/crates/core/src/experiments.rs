//! Monte Carlo studies: credible-set coverage, Bernstein–von Mises and bias
//! diagnostics, and posterior convergence rates.
//!
//! Every replication draws from its own stream keyed by
//! `(seed, n, prior, replication)`, so results do not depend on the number of
//! worker threads.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::data::{format_sig17, GenerativeModel, RiskSummary};
use crate::error::{Error, Result};
use crate::estimators::{aalen_nelson, j_alpha, u_zero};
use crate::posterior::{posterior_fixed_moments, posterior_moments, posterior_update};
use crate::prior::PriorSpec;
use crate::rng;
use crate::sampling::{credible_interval, quantile_sorted, PathSampler, SamplerConfig};

/// Stream key for a prior: the bits of `α` for the `α` family, a hash of the
/// label otherwise.
fn prior_key(prior: &PriorSpec) -> u64 {
    match prior.alpha_parameter() {
        Some(a) => a.to_bits(),
        None => {
            prior.label().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
        }
    }
}

fn mean_and_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (m, 0.0);
    }
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, var.sqrt())
}

/// Least-squares slope of `y` on `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Standard error of a coverage proportion at the nominal level.
pub fn coverage_se(level: f64, reps: usize) -> f64 {
    (level * (1.0 - level) / reps as f64).sqrt()
}

/// Draws `M` posterior values of `A(t)` for one fitted dataset.
fn posterior_draws(
    risk: &RiskSummary,
    prior: &PriorSpec,
    t: f64,
    cfg: &SamplerConfig,
    include_continuous: bool,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<Vec<f64>> {
    let post = posterior_update(prior, risk)?;
    let sampler = PathSampler::with_continuous(&post, t, cfg, include_continuous)?;
    Ok((0..cfg.draws).map(|_| sampler.sample_value_at(t, rng)).collect())
}

fn check_t_eval(model: &GenerativeModel, t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite() && model.q(t) > 0.0) {
        return Err(Error::invalid(format!("t_eval = {t} is infeasible: need t > 0 with Q(t) > 0")));
    }
    Ok(())
}

/// Settings of a coverage study.
#[derive(Debug, Clone)]
pub struct CoverageConfig {
    pub sample_sizes: Vec<usize>,
    pub priors: Vec<PriorSpec>,
    pub reps: usize,
    pub level: f64,
    pub t_eval: f64,
    pub model: GenerativeModel,
    pub draws: usize,
    pub seed: u64,
    /// Include the continuous posterior part in `A(t_eval)`.
    pub include_continuous: bool,
    pub epsilon: Option<f64>,
}

impl Default for CoverageConfig {
    fn default() -> Self {
        Self {
            sample_sizes: vec![10, 100, 1000],
            priors: [0.25, 0.5, 1.0].iter().map(|&a| PriorSpec::alpha(a).unwrap()).collect(),
            reps: 500,
            level: 0.9,
            t_eval: 2.0,
            model: GenerativeModel::new(1.0, 0.25).unwrap(),
            draws: 1000,
            seed: 1,
            include_continuous: true,
            epsilon: None,
        }
    }
}

impl CoverageConfig {
    /// Replaces the priors by the `α` family at each value.
    pub fn with_alphas(mut self, alphas: &[f64]) -> Result<Self> {
        self.priors = alphas.iter().map(|&a| PriorSpec::alpha(a)).collect::<Result<_>>()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::invalid("reps must be at least 1"));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::invalid(format!("level must lie in (0,1), got {}", self.level)));
        }
        if self.sample_sizes.is_empty() || self.sample_sizes.contains(&0) {
            return Err(Error::invalid("sample sizes must be a nonempty list of positive counts"));
        }
        if self.priors.is_empty() {
            return Err(Error::invalid("at least one prior is required"));
        }
        check_t_eval(&self.model, self.t_eval)?;
        self.sampler_config().validate()
    }

    fn sampler_config(&self) -> SamplerConfig {
        SamplerConfig { epsilon: self.epsilon, draws: self.draws, seed: self.seed, ..SamplerConfig::default() }
    }
}

/// Coverage of one `(n, prior)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRow {
    pub n: usize,
    pub prior: String,
    pub reps: usize,
    pub covered: usize,
    pub coverage: f64,
    pub se: f64,
    pub mean_width: f64,
    /// Average posterior standard deviation of `A(t_eval)`.
    pub mean_sd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyResult {
    pub level: f64,
    pub rows: Vec<CoverageRow>,
}

impl StudyResult {
    pub fn row(&self, n: usize, prior: &str) -> Option<&CoverageRow> {
        self.rows.iter().find(|r| r.n == n && r.prior == prior)
    }
}

struct RepOutcome {
    covered: bool,
    width: f64,
    sd: f64,
}

/// Posterior credible-set coverage of `A_0(t_eval)`.
pub fn run_coverage_study(cfg: &CoverageConfig) -> Result<StudyResult> {
    cfg.validate()?;
    let truth = cfg.model.cumulative_hazard(cfg.t_eval);
    let scfg = cfg.sampler_config();
    let mut rows = Vec::new();
    for prior in &cfg.priors {
        for &n in &cfg.sample_sizes {
            let key = prior_key(prior);
            let outcomes = (0..cfg.reps)
                .into_par_iter()
                .map(|rep| -> Result<RepOutcome> {
                    let mut rng = rng::stream(cfg.seed, &[n as u64, key, rep as u64]);
                    let data = cfg.model.generate(n, &mut rng)?;
                    let risk = RiskSummary::from_dataset(&data)?;
                    let draws = posterior_draws(&risk, prior, cfg.t_eval, &scfg, cfg.include_continuous, &mut rng)?;
                    let (lo, hi) = credible_interval(&draws, cfg.level)?;
                    Ok(RepOutcome { covered: lo <= truth && truth <= hi, width: hi - lo, sd: mean_and_sd(&draws).1 })
                })
                .collect::<Result<Vec<_>>>()?;
            let covered = outcomes.iter().filter(|o| o.covered).count();
            let r = cfg.reps as f64;
            rows.push(CoverageRow {
                n,
                prior: prior.label(),
                reps: cfg.reps,
                covered,
                coverage: covered as f64 / r,
                se: coverage_se(cfg.level, cfg.reps),
                mean_width: outcomes.iter().map(|o| o.width).sum::<f64>() / r,
                mean_sd: outcomes.iter().map(|o| o.sd).sum::<f64>() / r,
            });
            log::info!("coverage n = {n}, {}: {covered}/{}", prior.label(), cfg.reps);
        }
    }
    Ok(StudyResult { level: cfg.level, rows })
}

/// Outcome of [`run_bvm_diagnostic`].
#[derive(Debug, Clone, PartialEq)]
pub struct BvmRecord {
    pub n: usize,
    pub prior: String,
    /// Monte Carlo standard deviation of `√n·A(t)` over the posterior draws.
    pub scaled_sd: f64,
    /// The same from the exact posterior variance.
    pub scaled_sd_exact: f64,
    /// `√U_0(t)`.
    pub target_sd: f64,
    /// Exponent `r = min(α, 1/2)` used for the bias scaling.
    pub rate: f64,
    /// `n^r (E[A_d(t) | data] − Â_n(t))`.
    pub scaled_bias: f64,
    /// `J_α(t)` when `α ≤ 1/2`, otherwise zero.
    pub target_bias: f64,
}

fn smoothness(prior: &PriorSpec) -> f64 {
    prior.alpha_smoothness().unwrap_or(1.0)
}

/// `n^{min(α,1/2)}(E[A_d(t) | data] − Â_n(t))` for one dataset.
fn scaled_bias(risk: &RiskSummary, prior: &PriorSpec, t: f64) -> Result<f64> {
    let post = posterior_update(prior, risk)?;
    let (fixed_mean, _) = posterior_fixed_moments(&post, t);
    let rate = smoothness(prior).min(0.5);
    Ok((risk.n() as f64).powf(rate) * (fixed_mean - aalen_nelson(risk).value_at(t)))
}

fn bias_target(prior: &PriorSpec, model: &GenerativeModel, t: f64) -> Result<f64> {
    let alpha = smoothness(prior);
    if alpha <= 0.5 {
        j_alpha(model, alpha, t)
    } else {
        Ok(0.0)
    }
}

/// Posterior spread and centering for one seeded dataset of size `n`.
pub fn run_bvm_diagnostic(
    n: usize,
    prior: &PriorSpec,
    model: &GenerativeModel,
    t_eval: f64,
    cfg: &SamplerConfig,
) -> Result<BvmRecord> {
    cfg.validate()?;
    check_t_eval(model, t_eval)?;
    let mut rng = rng::stream(cfg.seed, &[n as u64, prior_key(prior), 0]);
    let data = model.generate(n, &mut rng)?;
    let risk = RiskSummary::from_dataset(&data)?;
    let draws = posterior_draws(&risk, prior, t_eval, cfg, true, &mut rng)?;
    let root_n = (n as f64).sqrt();
    let post = posterior_update(prior, &risk)?;
    let (_, var) = posterior_moments(&post, t_eval)?;
    Ok(BvmRecord {
        n,
        prior: prior.label(),
        scaled_sd: root_n * mean_and_sd(&draws).1,
        scaled_sd_exact: root_n * var.sqrt(),
        target_sd: u_zero(model, t_eval)?.sqrt(),
        rate: smoothness(prior).min(0.5),
        scaled_bias: scaled_bias(&risk, prior, t_eval)?,
        target_bias: bias_target(prior, model, t_eval)?,
    })
}

/// Average scaled bias over replicate datasets.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasSummary {
    pub n: usize,
    pub prior: String,
    pub rate: f64,
    pub values: Vec<f64>,
    pub mean: f64,
    /// Standard error of `mean`.
    pub se: f64,
    pub target: f64,
}

/// `n^{min(α,1/2)}(E[A_d(t) | data] − Â_n(t))` over `reps` seeded datasets.
pub fn run_bias_study(
    n: usize,
    prior: &PriorSpec,
    model: &GenerativeModel,
    t_eval: f64,
    reps: usize,
    seed: u64,
) -> Result<BiasSummary> {
    if reps == 0 {
        return Err(Error::invalid("reps must be at least 1"));
    }
    check_t_eval(model, t_eval)?;
    let key = prior_key(prior);
    let values = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = rng::stream(seed, &[n as u64, key, rep as u64]);
            let risk = RiskSummary::from_dataset(&model.generate(n, &mut rng)?)?;
            scaled_bias(&risk, prior, t_eval)
        })
        .collect::<Result<Vec<_>>>()?;
    let (mean, sd) = mean_and_sd(&values);
    Ok(BiasSummary {
        n,
        prior: prior.label(),
        rate: smoothness(prior).min(0.5),
        se: sd / (reps as f64).sqrt(),
        mean,
        values,
        target: bias_target(prior, model, t_eval)?,
    })
}

/// Settings of a convergence-rate study.
#[derive(Debug, Clone)]
pub struct RateConfig {
    pub alphas: Vec<f64>,
    pub sample_sizes: Vec<usize>,
    pub reps: usize,
    pub model: GenerativeModel,
    pub t_eval: f64,
    pub seed: u64,
    pub draws: usize,
}

impl Default for RateConfig {
    fn default() -> Self {
        Self {
            alphas: vec![0.25, 0.5, 1.0],
            sample_sizes: vec![100, 1000, 10_000],
            reps: 100,
            model: GenerativeModel::new(1.0, 0.25).unwrap(),
            t_eval: 2.0,
            seed: 1,
            draws: 400,
        }
    }
}

impl RateConfig {
    pub fn validate(&self) -> Result<()> {
        let mut ns = self.sample_sizes.clone();
        ns.sort_unstable();
        ns.dedup();
        if ns.len() < 3 || ns[0] == 0 || (ns[ns.len() - 1] as f64) < 100.0 * ns[0] as f64 {
            return Err(Error::invalid("rate study needs at least 3 sample sizes spanning at least 2 decades"));
        }
        if self.alphas.is_empty() || self.alphas.iter().any(|&a| !(a > 0.0)) {
            return Err(Error::invalid("alphas must be a nonempty list of positive values"));
        }
        if self.reps == 0 || self.draws < 2 {
            return Err(Error::invalid("rate study needs reps >= 1 and draws >= 2"));
        }
        check_t_eval(&self.model, self.t_eval)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub alpha: f64,
    pub n: usize,
    /// Average posterior interquartile width of `A(t_eval)`.
    pub mean_iqr: f64,
    /// Root mean square of `E[A(t_eval) | data] − A_0(t_eval)`.
    pub rms_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateSlope {
    pub alpha: f64,
    /// Slope of `log(mean_iqr)` against `log n`.
    pub slope: f64,
    /// `−min(α, 1/2)`.
    pub expected: f64,
    /// Slope of `log(rms_error)` against `log n`.
    pub error_slope: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateStudy {
    pub rows: Vec<RateRow>,
    pub slopes: Vec<RateSlope>,
}

/// Posterior contraction: interquartile width of `A(t_eval)` as `n` grows.
pub fn run_rate_study(cfg: &RateConfig) -> Result<RateStudy> {
    cfg.validate()?;
    let truth = cfg.model.cumulative_hazard(cfg.t_eval);
    let scfg = SamplerConfig { draws: cfg.draws, seed: cfg.seed, ..SamplerConfig::default() };
    let mut rows = Vec::new();
    let mut slopes = Vec::new();
    for &alpha in &cfg.alphas {
        let prior = PriorSpec::alpha(alpha)?;
        let key = prior_key(&prior);
        let mut iqr_means = Vec::new();
        let mut errs = Vec::new();
        for &n in &cfg.sample_sizes {
            let per_rep = (0..cfg.reps)
                .into_par_iter()
                .map(|rep| -> Result<(f64, f64)> {
                    let mut rng = rng::stream(cfg.seed, &[n as u64, key, rep as u64]);
                    let risk = RiskSummary::from_dataset(&cfg.model.generate(n, &mut rng)?)?;
                    let mut draws = posterior_draws(&risk, &prior, cfg.t_eval, &scfg, true, &mut rng)?;
                    draws.sort_by(f64::total_cmp);
                    let iqr = quantile_sorted(&draws, 0.75) - quantile_sorted(&draws, 0.25);
                    let (mean, _) = posterior_moments(&posterior_update(&prior, &risk)?, cfg.t_eval)?;
                    Ok((iqr, mean - truth))
                })
                .collect::<Result<Vec<_>>>()?;
            let r = cfg.reps as f64;
            let mean_iqr = per_rep.iter().map(|p| p.0).sum::<f64>() / r;
            let rms_error = (per_rep.iter().map(|p| p.1 * p.1).sum::<f64>() / r).sqrt();
            iqr_means.push(mean_iqr);
            errs.push(rms_error);
            rows.push(RateRow { alpha, n, mean_iqr, rms_error });
        }
        let ln_n: Vec<f64> = cfg.sample_sizes.iter().map(|&n| (n as f64).ln()).collect();
        let ln_w: Vec<f64> = iqr_means.iter().map(|w| w.ln()).collect();
        let ln_e: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
        slopes.push(RateSlope {
            alpha,
            slope: ls_slope(&ln_n, &ln_w),
            expected: -alpha.min(0.5),
            error_slope: ls_slope(&ln_n, &ln_e),
        });
    }
    Ok(RateStudy { rows, slopes })
}

/// Output format of [`emit_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Svg,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "svg" => Ok(Self::Svg),
            other => Err(Error::invalid(format!("unknown report format '{other}' (expected csv or svg)"))),
        }
    }
}

/// One line of the results CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub n: usize,
    pub prior: String,
    pub reps: usize,
    pub covered: usize,
    pub coverage: f64,
    pub se: f64,
    pub mean_width: f64,
}

impl From<&CoverageRow> for ReportRow {
    fn from(r: &CoverageRow) -> Self {
        Self {
            n: r.n,
            prior: r.prior.clone(),
            reps: r.reps,
            covered: r.covered,
            coverage: r.coverage,
            se: r.se,
            mean_width: r.mean_width,
        }
    }
}

pub const REPORT_HEADER: [&str; 7] = ["n", "prior", "reps", "covered", "coverage", "se", "mean_width"];

/// Writes `result` as CSV or SVG. Nothing is created for an empty result.
pub fn emit_report(result: &StudyResult, format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    if result.rows.is_empty() {
        return Err(Error::invalid("cannot emit a report for an empty study"));
    }
    let bytes = match format {
        ReportFormat::Csv => report_csv(result)?,
        ReportFormat::Svg => report_svg(result).into_bytes(),
    };
    fs::write(path, bytes)?;
    Ok(())
}

fn report_csv(result: &StudyResult) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(REPORT_HEADER)?;
    for r in &result.rows {
        w.write_record([
            r.n.to_string(),
            r.prior.clone(),
            r.reps.to_string(),
            r.covered.to_string(),
            format_sig17(r.coverage),
            format_sig17(r.se),
            format_sig17(r.mean_width),
        ])?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Parses a results CSV written by [`emit_report`].
pub fn read_report_csv(path: impl AsRef<Path>) -> Result<Vec<ReportRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != REPORT_HEADER {
        return Err(Error::Parse { line: 1, message: format!("expected header {}", REPORT_HEADER.join(",")) });
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i as u64 + 2;
        let field =
            |k: usize| rec.get(k).ok_or(Error::Parse { line, message: format!("missing column {}", REPORT_HEADER[k]) });
        let bad = |k: usize| {
            move |e: &dyn std::fmt::Display| Error::Parse { line, message: format!("{}: {e}", REPORT_HEADER[k]) }
        };
        rows.push(ReportRow {
            n: field(0)?.parse().map_err(|e| bad(0)(&e))?,
            prior: field(1)?.to_owned(),
            reps: field(2)?.parse().map_err(|e| bad(2)(&e))?,
            covered: field(3)?.parse().map_err(|e| bad(3)(&e))?,
            coverage: field(4)?.parse().map_err(|e| bad(4)(&e))?,
            se: field(5)?.parse().map_err(|e| bad(5)(&e))?,
            mean_width: field(6)?.parse().map_err(|e| bad(6)(&e))?,
        });
    }
    Ok(rows)
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// One panel per prior: coverage against `log10 n`, with solid lines at the
/// level and at level ± 2 SE.
fn report_svg(result: &StudyResult) -> String {
    const W: f64 = 320.0;
    const H: f64 = 260.0;
    const ML: f64 = 50.0;
    const MR: f64 = 15.0;
    const MT: f64 = 30.0;
    const MB: f64 = 40.0;

    let mut priors: Vec<&str> = Vec::new();
    for r in &result.rows {
        if !priors.contains(&r.prior.as_str()) {
            priors.push(&r.prior);
        }
    }
    let level = result.level;
    let max_se = result.rows.iter().map(|r| r.se).fold(0.0, f64::max);
    let mut y_lo = (level - 3.0 * max_se).min(result.rows.iter().map(|r| r.coverage).fold(1.0, f64::min));
    let mut y_hi = (level + 3.0 * max_se).max(result.rows.iter().map(|r| r.coverage).fold(0.0, f64::max));
    y_lo = (y_lo - 0.02).max(0.0);
    y_hi = (y_hi + 0.02).min(1.0);
    let lx: Vec<f64> = result.rows.iter().map(|r| (r.n as f64).log10()).collect();
    let x_lo = lx.iter().cloned().fold(f64::INFINITY, f64::min) - 0.25;
    let x_hi = lx.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 0.25;

    let total_w = W * priors.len() as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{H}" viewBox="0 0 {total_w} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{total_w}" height="{H}" fill="white"/>"#);
    for (p, label) in priors.iter().enumerate() {
        let ox = W * p as f64;
        let px = |x: f64| ox + ML + (x - x_lo) / (x_hi - x_lo) * (W - ML - MR);
        let py = |y: f64| MT + (y_hi - y) / (y_hi - y_lo) * (H - MT - MB);
        let rows: Vec<&CoverageRow> = result.rows.iter().filter(|r| r.prior == *label).collect();
        let se = rows.iter().map(|r| r.se).fold(0.0, f64::max);
        let _ = writeln!(s, r#"<g class="panel">"#);
        let _ =
            writeln!(s, r#"<text x="{:.1}" y="18" text-anchor="middle">{}</text>"#, ox + W / 2.0, escape_xml(label));
        let _ = writeln!(
            s,
            r#"<rect x="{:.1}" y="{MT}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
            ox + ML,
            W - ML - MR,
            H - MT - MB
        );
        for y in [level - 2.0 * se, level, level + 2.0 * se] {
            let _ = writeln!(
                s,
                r#"<line class="band" x1="{:.1}" y1="{:.2}" x2="{:.1}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
                px(x_lo),
                py(y),
                px(x_hi),
                py(y)
            );
        }
        for k in 0..=4 {
            let y = y_lo + (y_hi - y_lo) * k as f64 / 4.0;
            let _ =
                writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{y:.3}</text>"#, ox + ML - 4.0, py(y) + 4.0);
        }
        for r in &rows {
            let x = px((r.n as f64).log10());
            let _ = writeln!(s, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, H - MB + 15.0, r.n);
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">n (log scale)</text>"#,
            ox + ML + (W - ML - MR) / 2.0,
            H - 6.0
        );
        let pts: Vec<String> =
            rows.iter().map(|r| format!("{:.2},{:.2}", px((r.n as f64).log10()), py(r.coverage))).collect();
        let _ = writeln!(
            s,
            r#"<polyline class="coverage" points="{}" fill="none" stroke="black" stroke-dasharray="2,3"/>"#,
            pts.join(" ")
        );
        for r in &rows {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="black"><title>n={} coverage={:.4}</title></circle>"#,
                px((r.n as f64).log10()),
                py(r.coverage),
                r.n,
                r.coverage
            );
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}
