//! Bayesian survival inference with priors neutral to the right.
//!
//! A prior is given by its Lévy measure `ν(ds, dx) = x⁻¹ g_s(x) λ(s) dx ds`.
//! Given right-censored data the posterior is again a subordinator with
//! fixed jumps at the observed death times, so moments are explicit and
//! sample paths can be drawn directly.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod posterior;
pub mod prior;
pub mod quadrature;
pub mod rng;
pub mod sampling;
pub mod special;

pub use data::{generate_dataset, risk_summary, CensoredObservation, Dataset, GenerativeModel, RiskSummary};
pub use error::{Error, Result};
pub use estimators::{aalen_nelson, j_alpha, product_limit_survival, u_zero, StepEstimate, SurvivalCurve};
pub use experiments::{
    emit_report, run_bias_study, run_bvm_diagnostic, run_coverage_study, run_rate_study, CoverageConfig, RateConfig,
    ReportFormat, StudyResult,
};
pub use posterior::{
    continuous_part_moments, jump_moment_ck, jump_raw_moment, posterior_fixed_moments, posterior_moments,
    posterior_update, JumpLaw, PosteriorLaw,
};
pub use prior::{check_conditions, prior_moments, ConditionReport, PriorSpec};
pub use sampling::{
    credible_interval, sample_chf_path, sample_continuous_part, sample_fixed_part, sample_jump, HazardPath,
    PathSampler, SamplerConfig,
};
