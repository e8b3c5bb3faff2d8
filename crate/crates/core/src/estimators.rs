//! Frequentist reference estimators and the asymptotic targets `U_0`, `J_α`.

use crate::data::{GenerativeModel, RiskSummary};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::sampling::{Compensator, HazardPath};
use crate::special::gamma;

/// Right-continuous step function given by its values at jump times.
#[derive(Debug, Clone, PartialEq)]
pub struct StepEstimate {
    times: Vec<f64>,
    values: Vec<f64>,
    /// Value before the first time.
    initial: f64,
}

impl StepEstimate {
    pub fn new(times: Vec<f64>, values: Vec<f64>, initial: f64) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::invalid("step estimate needs one value per time"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("step estimate times must be strictly increasing"));
        }
        Ok(Self { times, values, initial })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }

    pub fn value_at(&self, t: f64) -> f64 {
        match self.times.partition_point(|&s| s <= t) {
            0 => self.initial,
            k => self.values[k - 1],
        }
    }
}

/// Anything that can be product-integrated: a pure-jump c.h.f. plus an
/// optional continuous drift.
pub trait CumulativeHazard {
    /// `(time, increment)` pairs, ascending in time.
    fn increments(&self) -> Vec<(f64, f64)>;

    fn drift(&self) -> Option<Compensator> {
        None
    }
}

impl CumulativeHazard for StepEstimate {
    fn increments(&self) -> Vec<(f64, f64)> {
        let mut prev = self.initial;
        self.times
            .iter()
            .zip(&self.values)
            .map(|(&t, &v)| {
                let d = v - prev;
                prev = v;
                (t, d)
            })
            .collect()
    }
}

impl CumulativeHazard for HazardPath {
    fn increments(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(self.jumps().len());
        for &(t, x) in self.jumps() {
            match out.last_mut() {
                Some(last) if last.0 == t => last.1 += x,
                _ => out.push((t, x)),
            }
        }
        out
    }

    fn drift(&self) -> Option<Compensator> {
        HazardPath::drift(self).cloned()
    }
}

/// Survival function from a product integral: jump product times
/// `exp(−drift)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalCurve {
    steps: StepEstimate,
    drift: Option<Compensator>,
}

impl SurvivalCurve {
    pub fn steps(&self) -> &StepEstimate {
        &self.steps
    }

    pub fn value_at(&self, t: f64) -> f64 {
        let s = self.steps.value_at(t);
        match &self.drift {
            Some(d) => s * (-d.value_at(t)).exp(),
            None => s,
        }
    }
}

/// `Â_n(t) = Σ_{t_i ≤ t} ΔN(t_i)/Y(t_i)`.
pub fn aalen_nelson(risk: &RiskSummary) -> StepEstimate {
    let mut acc = 0.0;
    let values = risk
        .delta_n()
        .iter()
        .zip(risk.y())
        .map(|(&d, &y)| {
            acc += d as f64 / y as f64;
            acc
        })
        .collect();
    StepEstimate { times: risk.event_times().to_vec(), values, initial: 0.0 }
}

/// Rounding allowance for increments recovered by differencing a step function.
const INCREMENT_SLACK: f64 = 1e-12;

/// `S(t) = Π_{s ≤ t}(1 − ΔA(s)) · exp(−drift(t))`.
pub fn product_limit_survival(hazard: &impl CumulativeHazard) -> Result<SurvivalCurve> {
    let incs = hazard.increments();
    let mut s = 1.0;
    let mut times = Vec::with_capacity(incs.len());
    let mut values = Vec::with_capacity(incs.len());
    for (t, d) in incs {
        if d > 1.0 + INCREMENT_SLACK {
            return Err(Error::invalid(format!("increment {d} at time {t} exceeds 1")));
        }
        if d < -INCREMENT_SLACK {
            return Err(Error::invalid(format!("negative increment {d} at time {t}")));
        }
        s *= 1.0 - d.clamp(0.0, 1.0);
        times.push(t);
        values.push(s);
    }
    Ok(SurvivalCurve { steps: StepEstimate::new(times, values, 1.0)?, drift: hazard.drift() })
}

fn check_time(model: &GenerativeModel, t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("time must be finite and >= 0, got {t}")));
    }
    if !(model.q(t) > 0.0) {
        return Err(Error::invalid(format!("Q({t}) = 0: outside the feasible horizon")));
    }
    Ok(())
}

/// `U_0(t) = ∫₀ᵗ dA_0(s)/Q(s)`.
pub fn u_zero(model: &GenerativeModel, t: f64) -> Result<f64> {
    check_time(model, t)?;
    integrate(|s| model.hazard(s) / model.q(s), 0.0, t, Tolerance { abs: 1e-13, rel: 1e-13, max_intervals: 200 })
}

/// `J_α(t) = αΓ(α+1) ∫₀ᵗ dA_0(s)/Q(s)^α`.
pub fn j_alpha(model: &GenerativeModel, alpha: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::invalid(format!("alpha must be > 0, got {alpha}")));
    }
    check_time(model, t)?;
    let integral = integrate(
        |s| model.hazard(s) * model.q(s).powf(-alpha),
        0.0,
        t,
        Tolerance { abs: 1e-13, rel: 1e-13, max_intervals: 200 },
    )?;
    Ok(alpha * gamma(alpha + 1.0) * integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Dataset;

    fn risk(pairs: &[(f64, bool)]) -> RiskSummary {
        RiskSummary::from_dataset(&Dataset::from_pairs(pairs).unwrap()).unwrap()
    }

    #[test]
    fn aalen_nelson_examples() {
        let a = aalen_nelson(&risk(&[(1.0, true)]));
        assert_eq!(a.value_at(1.0), 1.0);
        assert_eq!(a.value_at(0.5), 0.0);
        let a = aalen_nelson(&risk(&[(1.0, true), (2.0, false), (3.0, true)]));
        assert!((a.value_at(3.0) - 4.0 / 3.0).abs() < 1e-15);
        let a = aalen_nelson(&risk(&[(1.0, false), (2.0, false)]));
        assert_eq!(a.value_at(10.0), 0.0);
    }

    #[test]
    fn kaplan_meier_examples() {
        let s = product_limit_survival(&aalen_nelson(&risk(&[(1.0, true), (2.0, false), (3.0, true)]))).unwrap();
        assert!((s.value_at(1.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.value_at(3.0), 0.0);
        let s = product_limit_survival(&HazardPath::empty()).unwrap();
        assert_eq!(s.value_at(100.0), 1.0);
        let s = product_limit_survival(&HazardPath::new(vec![(1.0, 1.0)]).unwrap()).unwrap();
        assert_eq!(s.value_at(1.0), 0.0);
        assert_eq!(s.value_at(7.0), 0.0);
        assert_eq!(s.value_at(0.9), 1.0);
    }

    #[test]
    fn full_risk_set_death_reaches_zero() {
        let r = risk(&[(0.1, true), (0.2, true), (0.3, true), (0.7, true), (0.7, true), (0.7, true)]);
        let s = product_limit_survival(&aalen_nelson(&r)).unwrap();
        assert_eq!(s.value_at(0.7), 0.0);
    }

    #[test]
    fn increment_above_one_is_rejected() {
        let step = StepEstimate::new(vec![1.0], vec![1.5], 0.0).unwrap();
        assert!(product_limit_survival(&step).is_err());
    }

    #[test]
    fn drift_enters_as_exponential() {
        let comp = Compensator::from_parts(vec![0.0, 2.0], vec![0.0, 0.2]);
        let path = HazardPath::new(vec![(1.0, 0.5)]).unwrap().with_drift(Some(std::sync::Arc::new(comp)));
        let s = product_limit_survival(&path).unwrap();
        assert!((s.value_at(2.0) - 0.5 * (-0.2f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn u_zero_closed_forms() {
        let m = GenerativeModel::new(1.0, 0.25).unwrap();
        let exact = (2.5f64.exp() - 1.0) / 1.25;
        assert!(((u_zero(&m, 2.0).unwrap() - exact) / exact).abs() < 1e-8);
        assert!((exact - 8.9460).abs() < 1e-4);
        assert_eq!(u_zero(&m, 0.0).unwrap(), 0.0);
        let m0 = GenerativeModel::new(1.0, 0.0).unwrap();
        assert!((u_zero(&m0, 1.0).unwrap() - (1f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn j_alpha_closed_forms() {
        let m = GenerativeModel::new(1.0, 0.25).unwrap();
        for (alpha, reference) in [(0.5, 1.7656), (0.25, 0.6296)] {
            let exact = gamma(alpha + 1.0) * ((1.25 * alpha * 2.0f64).exp() - 1.0) / 1.25;
            let v = j_alpha(&m, alpha, 2.0).unwrap();
            assert!(((v - exact) / exact).abs() < 1e-8);
            assert!((exact - reference).abs() < 1e-4);
        }
        assert_eq!(j_alpha(&m, 0.5, 0.0).unwrap(), 0.0);
        assert!(j_alpha(&m, 0.0, 1.0).is_err());
    }
}
