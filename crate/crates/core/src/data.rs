//! Right-censored samples and their counting-process summaries.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};

/// One `(T, δ)` pair: observed time and whether it is an uncensored death.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensoredObservation {
    pub time: f64,
    pub event: bool,
}

impl CensoredObservation {
    pub fn new(time: f64, event: bool) -> Result<Self> {
        if !time.is_finite() || time < 0.0 {
            return Err(Error::invalid(format!("observation time must be finite and >= 0, got {time}")));
        }
        Ok(Self { time, event })
    }
}

/// A sample of censored observations, kept sorted by time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    observations: Vec<CensoredObservation>,
}

impl Dataset {
    /// Builds a dataset, stably sorting by time.
    pub fn new(mut observations: Vec<CensoredObservation>) -> Result<Self> {
        for o in &observations {
            if !o.time.is_finite() || o.time < 0.0 {
                return Err(Error::invalid(format!("observation time must be finite and >= 0, got {}", o.time)));
            }
        }
        observations.sort_by(|a, b| a.time.total_cmp(&b.time));
        Ok(Self { observations })
    }

    /// Convenience constructor from `(time, event)` pairs.
    pub fn from_pairs(pairs: &[(f64, bool)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(time, event)| CensoredObservation { time, event }).collect())
    }

    pub fn observations(&self) -> &[CensoredObservation] {
        &self.observations
    }

    pub fn n(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn event_count(&self) -> usize {
        self.observations.iter().filter(|o| o.event).count()
    }

    pub fn max_time(&self) -> Option<f64> {
        self.observations.last().map(|o| o.time)
    }

    /// Reads the `time,event` CSV format.
    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let file = File::open(path)?;
        Self::from_reader(BufReader::new(file))
    }

    /// Parses the `time,event` CSV format from any reader.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "time" || &headers[1] != "event" {
            return Err(Error::Parse { line: 1, message: "header must be exactly `time,event`".into() });
        }
        let mut observations = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                Error::Parse { line, message: e.to_string() }
            })?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            if record.len() != 2 {
                return Err(Error::Parse { line, message: format!("expected 2 fields, found {}", record.len()) });
            }
            let time: f64 = record[0]
                .parse()
                .map_err(|_| Error::Parse { line, message: format!("time `{}` is not a number", &record[0]) })?;
            if !time.is_finite() || time < 0.0 {
                return Err(Error::Parse { line, message: format!("time {time} must be finite and >= 0") });
            }
            let event = match &record[1] {
                "0" => false,
                "1" => true,
                other => {
                    return Err(Error::Parse { line, message: format!("event `{other}` must be 0 or 1") });
                }
            };
            observations.push(CensoredObservation { time, event });
        }
        Self::new(observations)
    }

    /// Writes the `time,event` CSV format with 17 significant digits.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = File::create(path)?;
        let mut w = BufWriter::new(file);
        self.to_writer(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn to_writer<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "time,event")?;
        for o in &self.observations {
            writeln!(w, "{},{}", format_sig17(o.time), u8::from(o.event))?;
        }
        Ok(())
    }
}

/// Positional decimal with 17 significant digits (enough to round-trip any f64).
pub fn format_sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.16}");
    }
    let exp = format!("{x:.16e}");
    let e: i32 = exp.rsplit('e').next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let decimals = (16 - e).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Warning conditions detected while summarizing a dataset.
#[derive(Debug, Clone, PartialEq)]
pub enum RiskWarning {
    /// More than one death recorded at the same time.
    TiedEvents { time: f64, count: usize },
}

/// Counting-process summary `N_n`, `Y_n`, `ΔN_n`, `Y_n⁺` of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskSummary {
    n: usize,
    event_times: Vec<f64>,
    delta_n: Vec<usize>,
    y: Vec<usize>,
    y_plus: Vec<usize>,
    /// All observation times, ascending (ties kept).
    sorted_times: Vec<f64>,
    /// Distinct observation times with `Y_n` evaluated at each.
    steps: Vec<(f64, usize)>,
    warnings: Vec<RiskWarning>,
}

impl RiskSummary {
    /// Summarizes a nonempty dataset.
    pub fn from_dataset(data: &Dataset) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let obs = data.observations();
        let n = obs.len();
        let mut event_times = Vec::new();
        let mut delta_n = Vec::new();
        let mut y = Vec::new();
        let mut steps = Vec::new();
        let mut warnings = Vec::new();
        let mut i = 0;
        while i < n {
            let t = obs[i].time;
            let at_risk = n - i;
            let mut j = i;
            let mut deaths = 0;
            while j < n && obs[j].time == t {
                deaths += usize::from(obs[j].event);
                j += 1;
            }
            steps.push((t, at_risk));
            if deaths > 0 {
                event_times.push(t);
                delta_n.push(deaths);
                y.push(at_risk);
                if deaths > 1 {
                    log::warn!("{deaths} tied deaths at time {t}; continuity of A_0 is violated");
                    warnings.push(RiskWarning::TiedEvents { time: t, count: deaths });
                }
            }
            i = j;
        }
        let y_plus = y.iter().zip(&delta_n).map(|(y, d)| y - d).collect();
        Ok(Self {
            n,
            event_times,
            delta_n,
            y,
            y_plus,
            sorted_times: obs.iter().map(|o| o.time).collect(),
            steps,
            warnings,
        })
    }

    /// The summary of no data at all: `Y_n ≡ 0`, no events.
    pub fn empty() -> Self {
        Self {
            n: 0,
            event_times: Vec::new(),
            delta_n: Vec::new(),
            y: Vec::new(),
            y_plus: Vec::new(),
            sorted_times: Vec::new(),
            steps: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of distinct uncensored times, `q_n`.
    pub fn q_n(&self) -> usize {
        self.event_times.len()
    }

    pub fn event_times(&self) -> &[f64] {
        &self.event_times
    }

    pub fn delta_n(&self) -> &[usize] {
        &self.delta_n
    }

    pub fn y(&self) -> &[usize] {
        &self.y
    }

    pub fn y_plus(&self) -> &[usize] {
        &self.y_plus
    }

    pub fn warnings(&self) -> &[RiskWarning] {
        &self.warnings
    }

    pub fn has_ties(&self) -> bool {
        !self.warnings.is_empty()
    }

    /// `N_n(t)`: number of deaths at or before `t`.
    pub fn n_at(&self, t: f64) -> usize {
        let k = self.event_times.partition_point(|&s| s <= t);
        self.delta_n[..k].iter().sum()
    }

    /// `Y_n(t) = #{i : T_i ≥ t}`.
    pub fn y_at(&self, t: f64) -> usize {
        self.n - self.sorted_times.partition_point(|&s| s < t)
    }

    /// Distinct observation times `u_j` with `Y_n(u_j)`.
    ///
    /// `Y_n(s)` equals the count attached to `u_j` for every `s ∈ (u_{j−1}, u_j]`
    /// (with `u_0 = 0`) and is zero after the last time.
    pub fn risk_steps(&self) -> &[(f64, usize)] {
        &self.steps
    }

    /// Maximal intervals of `(0, horizon]` on which `Y_n` is constant.
    pub fn constant_risk_intervals(&self, horizon: f64) -> Vec<RiskInterval> {
        let mut out = Vec::new();
        let mut start = 0.0;
        for &(u, count) in &self.steps {
            if start >= horizon {
                break;
            }
            let end = u.min(horizon);
            if end > start {
                out.push(RiskInterval { start, end, at_risk: count });
            }
            start = start.max(u);
        }
        if horizon > start {
            out.push(RiskInterval { start, end: horizon, at_risk: 0 });
        }
        out
    }
}

/// A time interval `(start, end]` with a constant risk-set size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskInterval {
    pub start: f64,
    pub end: f64,
    pub at_risk: usize,
}

/// `Q(t)·n` style helper: `Y_n(t)/n`.
pub fn empirical_q(data: &Dataset, t: f64) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let obs = data.observations();
    let before = obs.partition_point(|o| o.time < t);
    Ok((obs.len() - before) as f64 / obs.len() as f64)
}

/// Exponential survival times censored by independent exponential times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerativeModel {
    survival_rate: f64,
    censoring_rate: f64,
}

impl GenerativeModel {
    pub fn new(survival_rate: f64, censoring_rate: f64) -> Result<Self> {
        if !(survival_rate > 0.0 && survival_rate.is_finite()) {
            return Err(Error::invalid(format!("survival rate must be positive, got {survival_rate}")));
        }
        if !(censoring_rate >= 0.0 && censoring_rate.is_finite()) {
            return Err(Error::invalid(format!("censoring rate must be >= 0, got {censoring_rate}")));
        }
        Ok(Self { survival_rate, censoring_rate })
    }

    pub fn survival_rate(&self) -> f64 {
        self.survival_rate
    }

    pub fn censoring_rate(&self) -> f64 {
        self.censoring_rate
    }

    /// True cumulative hazard `A_0(t)`.
    pub fn cumulative_hazard(&self, t: f64) -> f64 {
        self.survival_rate * t
    }

    /// Hazard rate `dA_0/dt`.
    pub fn hazard(&self, _t: f64) -> f64 {
        self.survival_rate
    }

    /// `Q(t) = Pr(T ≥ t)`.
    pub fn q(&self, t: f64) -> f64 {
        (-(self.survival_rate + self.censoring_rate) * t).exp()
    }

    /// Probability that an observation is uncensored.
    pub fn event_probability(&self) -> f64 {
        self.survival_rate / (self.survival_rate + self.censoring_rate)
    }

    /// Draws `n` observations `T = min(X, C)`, `δ = [X ≤ C]`, sorted by time.
    pub fn generate<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Dataset> {
        if n == 0 {
            return Err(Error::invalid("sample size must be at least 1"));
        }
        let x_dist = Exp::new(self.survival_rate).map_err(|e| Error::invalid(e.to_string()))?;
        let c_dist = if self.censoring_rate > 0.0 {
            Some(Exp::new(self.censoring_rate).map_err(|e| Error::invalid(e.to_string()))?)
        } else {
            None
        };
        let obs = (0..n)
            .map(|_| {
                let x: f64 = x_dist.sample(rng);
                let c = c_dist.as_ref().map_or(f64::INFINITY, |d| d.sample(rng));
                CensoredObservation { time: x.min(c), event: x <= c }
            })
            .collect();
        Dataset::new(obs)
    }
}

/// Free-function form of [`GenerativeModel::generate`].
pub fn generate_dataset<R: Rng + ?Sized>(model: &GenerativeModel, n: usize, rng: &mut R) -> Result<Dataset> {
    model.generate(n, rng)
}

/// Free-function form of [`RiskSummary::from_dataset`].
pub fn risk_summary(data: &Dataset) -> Result<RiskSummary> {
    RiskSummary::from_dataset(data)
}
