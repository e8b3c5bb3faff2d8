use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ntr_core::data::{format_sig17, Dataset, GenerativeModel, RiskSummary};
use ntr_core::estimators::aalen_nelson;
use ntr_core::experiments::{
    emit_report, run_bias_study, run_bvm_diagnostic, run_coverage_study, run_rate_study, CoverageConfig, RateConfig,
    ReportFormat,
};
use ntr_core::posterior::{posterior_moments, posterior_update};
use ntr_core::prior::{check_conditions, PriorSpec};
use ntr_core::rng;
use ntr_core::sampling::{PathSampler, SamplerConfig};

use crate::error::CliError;
use crate::options::RunConfig;

/// Runs the subcommand; returns the text for standard output.
pub fn dispatch(cfg: &RunConfig) -> Result<String, CliError> {
    match cfg.command.as_str() {
        "simulate" => simulate(cfg),
        "fit" => fit(cfg),
        "sample" => sample(cfg),
        "coverage" => coverage(cfg),
        "bvm-check" => bvm_check(cfg),
        "rate-study" => rate_study(cfg),
        "conditions" => conditions(cfg),
        other => Err(CliError::Config(format!("unknown subcommand `{other}`"))),
    }
}

fn model(cfg: &RunConfig) -> Result<GenerativeModel, CliError> {
    match cfg.f64_list("rates")?[..] {
        [s, c] => Ok(GenerativeModel::new(s, c)?),
        _ => Err(CliError::Config("`rates` takes exactly two values: survival,censoring".into())),
    }
}

fn prior(cfg: &RunConfig) -> Result<PriorSpec, CliError> {
    cfg.string("prior")?.parse::<PriorSpec>().map_err(|e| CliError::Config(format!("`prior`: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

fn load(cfg: &RunConfig) -> Result<(Dataset, RiskSummary), CliError> {
    let path = cfg.opt_path("data").ok_or_else(|| CliError::Config("missing required key `data`".into()))?;
    let data = Dataset::read_csv(&path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let risk = RiskSummary::from_dataset(&data)?;
    Ok((data, risk))
}

fn sampler_config(cfg: &RunConfig, draws: usize, seed: u64) -> Result<SamplerConfig, CliError> {
    let sc = SamplerConfig { epsilon: cfg.opt_f64("epsilon")?, draws, seed, ..SamplerConfig::default() };
    sc.validate()?;
    Ok(sc)
}

fn simulate(cfg: &RunConfig) -> Result<String, CliError> {
    let n = cfg.usize("n")?;
    let model = model(cfg)?;
    let seed = cfg.u64("seed")?;
    let out = cfg.out_path("data.csv");
    let data = model.generate(n, &mut rng::stream(seed, &[n as u64]))?;
    data.write_csv(&out).map_err(|e| CliError::Data(format!("{}: {e}", out.display())))?;
    Ok(format!("wrote {} observations ({} deaths) to {}\n", data.n(), data.event_count(), out.display()))
}

fn fit(cfg: &RunConfig) -> Result<String, CliError> {
    let (_, risk) = load(cfg)?;
    let prior = prior(cfg)?;
    let out = cfg.out_path("posterior.csv");
    let estimates = cfg.opt_path("estimates");
    let post = posterior_update(&prior, &risk)?;
    let mut text = String::from("t_i,y,delta_n,mean,var\n");
    for ((&t, &y), &d) in risk.event_times().iter().zip(risk.y()).zip(risk.delta_n()) {
        let (mean, var) = posterior_moments(&post, t)?;
        let _ = writeln!(text, "{},{y},{d},{},{}", format_sig17(t), format_sig17(mean), format_sig17(var));
    }
    write_file(&out, &text)?;
    let mut msg = format!("wrote posterior moments at {} death times to {}\n", risk.event_times().len(), out.display());
    if let Some(path) = estimates {
        let an = aalen_nelson(&risk);
        let mut text = String::from("time,value\n");
        for (&t, &v) in an.times().iter().zip(an.values()) {
            let _ = writeln!(text, "{},{}", format_sig17(t), format_sig17(v));
        }
        write_file(&path, &text)?;
        let _ = writeln!(msg, "wrote Aalen-Nelson estimate to {}", path.display());
    }
    Ok(msg)
}

fn sample(cfg: &RunConfig) -> Result<String, CliError> {
    let (data, risk) = load(cfg)?;
    let prior = prior(cfg)?;
    let seed = cfg.u64("seed")?;
    let draws = cfg.usize("draws")?;
    let sc = sampler_config(cfg, draws, seed)?;
    let include = cfg.bool("continuous")?;
    let tau = match cfg.opt_f64("tau")? {
        Some(t) => t,
        None => data.max_time().ok_or(ntr_core::Error::EmptyDataset)?,
    };
    let out = cfg.out_path("paths.csv");
    let post = posterior_update(&prior, &risk)?;
    let sampler = PathSampler::with_continuous(&post, tau, &sc, include)?;
    let mut rng = rng::stream(seed, &[draws as u64]);
    let mut text = String::from("draw,time,jump_size\n");
    for d in 0..draws {
        let path = sampler.sample_path(&mut rng)?;
        for &(t, x) in path.jumps() {
            let _ = writeln!(text, "{d},{},{}", format_sig17(t), format_sig17(x));
        }
    }
    write_file(&out, &text)?;
    Ok(format!("wrote {draws} posterior paths on [0, {tau}] to {}\n", out.display()))
}

fn coverage(cfg: &RunConfig) -> Result<String, CliError> {
    let format: ReportFormat = cfg.string("format")?.parse().map_err(|e| CliError::Config(format!("`format`: {e}")))?;
    let study = CoverageConfig {
        sample_sizes: cfg.usize_list("n")?,
        reps: cfg.usize("reps")?,
        level: cfg.f64("level")?,
        t_eval: cfg.f64("t-eval")?,
        model: model(cfg)?,
        draws: cfg.usize("draws")?,
        seed: cfg.u64("seed")?,
        include_continuous: cfg.bool("continuous")?,
        epsilon: cfg.opt_f64("epsilon")?,
        ..CoverageConfig::default()
    }
    .with_alphas(&cfg.f64_list("alpha")?)?;
    let out = cfg.out_path(match format {
        ReportFormat::Csv => "coverage.csv",
        ReportFormat::Svg => "coverage.svg",
    });
    study.validate()?;
    let result = run_coverage_study(&study)?;
    emit_report(&result, format, &out)?;
    let mut s = String::from("prior n coverage se mean_width\n");
    for r in &result.rows {
        let _ = writeln!(s, "{} {} {:.4} {:.4} {:.5}", r.prior, r.n, r.coverage, r.se, r.mean_width);
    }
    let _ = writeln!(s, "wrote {}", out.display());
    Ok(s)
}

fn bvm_check(cfg: &RunConfig) -> Result<String, CliError> {
    let n = cfg.usize("n")?;
    let prior = prior(cfg)?;
    let model = model(cfg)?;
    let t = cfg.f64("t-eval")?;
    let reps = cfg.usize("reps")?;
    let seed = cfg.u64("seed")?;
    let sc = sampler_config(cfg, cfg.usize("draws")?, seed)?;
    let rec = run_bvm_diagnostic(n, &prior, &model, t, &sc)?;
    let bias = run_bias_study(n, &prior, &model, t, reps, seed)?;
    let mut s = String::new();
    let _ = writeln!(s, "prior {} n {n} t {t}", rec.prior);
    let _ = writeln!(s, "sd(sqrt(n) A(t)) draws  {:.6}", rec.scaled_sd);
    let _ = writeln!(s, "sd(sqrt(n) A(t)) exact  {:.6}", rec.scaled_sd_exact);
    let _ = writeln!(s, "sqrt(U0(t))             {:.6}", rec.target_sd);
    let _ = writeln!(s, "scaled bias (one dataset, rate n^{})  {:.6}", rec.rate, rec.scaled_bias);
    let _ = writeln!(s, "scaled bias mean over {reps} datasets  {:.6} (se {:.6})", bias.mean, bias.se);
    let _ = writeln!(s, "bias target             {:.6}", bias.target);
    Ok(s)
}

fn rate_study(cfg: &RunConfig) -> Result<String, CliError> {
    let study = RateConfig {
        alphas: cfg.f64_list("alpha")?,
        sample_sizes: cfg.usize_list("n")?,
        reps: cfg.usize("reps")?,
        model: model(cfg)?,
        t_eval: cfg.f64("t-eval")?,
        seed: cfg.u64("seed")?,
        draws: cfg.usize("draws")?,
    };
    let out = cfg.out_path("rates.csv");
    study.validate()?;
    let res = run_rate_study(&study)?;
    let mut text = String::from("alpha,n,mean_iqr,rms_error\n");
    for r in &res.rows {
        let _ = writeln!(
            text,
            "{},{},{},{}",
            format_sig17(r.alpha),
            r.n,
            format_sig17(r.mean_iqr),
            format_sig17(r.rms_error)
        );
    }
    write_file(&out, &text)?;
    let mut s = String::from("alpha slope expected error_slope\n");
    for sl in &res.slopes {
        let _ = writeln!(s, "{} {:.4} {:.4} {:.4}", sl.alpha, sl.slope, sl.expected, sl.error_slope);
    }
    let _ = writeln!(s, "wrote {}", out.display());
    Ok(s)
}

fn conditions(cfg: &RunConfig) -> Result<String, CliError> {
    let prior = prior(cfg)?;
    let tau = cfg.f64("tau")?;
    let grid = cfg.usize("grid")?;
    let report = check_conditions(&prior, tau, grid)?;
    Ok(format!("prior {}\n{report}\n", prior.label()))
}
