//! Option table, config-file parsing and the merged run configuration.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Arg, ArgAction, Command};

use crate::error::CliError;

pub const SUBCOMMANDS: [&str; 7] = ["simulate", "fit", "sample", "coverage", "bvm-check", "rate-study", "conditions"];

pub const OUT_DIR_ENV: &str = "NTR_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fallback {
    Required,
    Optional,
    Value(&'static str),
}

pub struct OptionSpec {
    pub key: &'static str,
    pub value_name: &'static str,
    pub help: &'static str,
    /// Subcommands accepting the key, with their default.
    pub commands: &'static [(&'static str, Fallback)],
}

use Fallback::{Optional, Required, Value};

pub static OPTIONS: &[OptionSpec] = &[
    OptionSpec {
        key: "n",
        value_name: "N[,N...]",
        help: "sample size (coverage and rate-study take a list)",
        commands: &[
            ("simulate", Required),
            ("coverage", Value("10,100,1000")),
            ("bvm-check", Value("5000")),
            ("rate-study", Value("100,1000,10000")),
        ],
    },
    OptionSpec {
        key: "rates",
        value_name: "SURV,CENS",
        help: "exponential survival and censoring rates of the generating model",
        commands: &[
            ("simulate", Value("1,0.25")),
            ("coverage", Value("1,0.25")),
            ("bvm-check", Value("1,0.25")),
            ("rate-study", Value("1,0.25")),
        ],
    },
    OptionSpec {
        key: "seed",
        value_name: "U64",
        help: "master random seed",
        commands: &[
            ("simulate", Value("1")),
            ("sample", Value("1")),
            ("coverage", Value("1")),
            ("bvm-check", Value("1")),
            ("rate-study", Value("1")),
        ],
    },
    OptionSpec {
        key: "data",
        value_name: "PATH",
        help: "input CSV with header time,event",
        commands: &[("fit", Required), ("sample", Required)],
    },
    OptionSpec {
        key: "prior",
        value_name: "FAMILY:K=V[,K=V]",
        help: "prior: beta:c=,lambda= | dirichlet:a=,lambda= | gamma:d=,h= | alpha:a=",
        commands: &[
            ("fit", Value("beta:c=1,lambda=1")),
            ("sample", Value("beta:c=1,lambda=1")),
            ("bvm-check", Value("alpha:a=1")),
            ("conditions", Required),
        ],
    },
    OptionSpec {
        key: "alpha",
        value_name: "A[,A...]",
        help: "alpha-family smoothness values",
        commands: &[("coverage", Value("0.25,0.5,1")), ("rate-study", Value("0.25,0.5,1"))],
    },
    OptionSpec {
        key: "reps",
        value_name: "R",
        help: "replications per cell",
        commands: &[("coverage", Value("500")), ("bvm-check", Value("50")), ("rate-study", Value("100"))],
    },
    OptionSpec {
        key: "level",
        value_name: "P",
        help: "credible level in (0,1)",
        commands: &[("coverage", Value("0.9"))],
    },
    OptionSpec {
        key: "t-eval",
        value_name: "T",
        help: "evaluation time",
        commands: &[("coverage", Value("2")), ("bvm-check", Value("2")), ("rate-study", Value("2"))],
    },
    OptionSpec {
        key: "tau",
        value_name: "T",
        help: "time horizon (sample: defaults to the largest observed time)",
        commands: &[("sample", Optional), ("conditions", Value("2"))],
    },
    OptionSpec {
        key: "epsilon",
        value_name: "E",
        help: "jump-size truncation of the continuous part (default 1e-6/(n+1))",
        commands: &[("sample", Optional), ("coverage", Optional), ("bvm-check", Optional)],
    },
    OptionSpec {
        key: "draws",
        value_name: "M",
        help: "posterior draws",
        commands: &[
            ("sample", Value("10")),
            ("coverage", Value("1000")),
            ("bvm-check", Value("20000")),
            ("rate-study", Value("400")),
        ],
    },
    OptionSpec {
        key: "continuous",
        value_name: "BOOL",
        help: "include the continuous posterior part",
        commands: &[("sample", Value("true")), ("coverage", Value("true"))],
    },
    OptionSpec { key: "format", value_name: "csv|svg", help: "report format", commands: &[("coverage", Value("csv"))] },
    OptionSpec {
        key: "out",
        value_name: "PATH",
        help: "output file (default: a fixed name inside $NTR_OUT_DIR or the working directory)",
        commands: &[
            ("simulate", Optional),
            ("fit", Optional),
            ("sample", Optional),
            ("coverage", Optional),
            ("rate-study", Optional),
        ],
    },
    OptionSpec {
        key: "estimates",
        value_name: "PATH",
        help: "also write the Aalen-Nelson estimate as time,value",
        commands: &[("fit", Optional)],
    },
    OptionSpec {
        key: "grid",
        value_name: "G",
        help: "grid points per axis for the condition checks",
        commands: &[("conditions", Value("64"))],
    },
];

pub fn option(key: &str) -> Option<&'static OptionSpec> {
    OPTIONS.iter().find(|o| o.key == key)
}

pub fn keys_for(command: &str) -> Vec<&'static str> {
    OPTIONS.iter().filter(|o| o.commands.iter().any(|(c, _)| *c == command)).map(|o| o.key).collect()
}

fn default_for(spec: &OptionSpec, command: &str) -> Option<Fallback> {
    spec.commands.iter().find(|(c, _)| *c == command).map(|(_, d)| *d)
}

fn about(command: &str) -> &'static str {
    match command {
        "simulate" => "generate right-censored exponential data",
        "fit" => "posterior moments of A(t) at every death time",
        "sample" => "draw posterior cumulative hazard paths",
        "coverage" => "credible-set coverage study",
        "bvm-check" => "posterior spread and centering diagnostics",
        "rate-study" => "posterior contraction slopes",
        _ => "check the regularity conditions of a prior",
    }
}

/// The clap command tree, generated from [`OPTIONS`].
pub fn command() -> Command {
    let mut root = Command::new("ntr")
        .about("Bayesian survival inference with priors neutral to the right")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true);
    for name in SUBCOMMANDS {
        let mut sub = Command::new(name).about(about(name)).arg(
            Arg::new("config")
                .long("config")
                .value_name("PATH")
                .help("file of `key = value` lines")
                .action(ArgAction::Set),
        );
        for spec in OPTIONS {
            let Some(default) = default_for(spec, name) else { continue };
            let help = match default {
                Required => format!("{} [required]", spec.help),
                Optional => spec.help.to_string(),
                Value(v) => format!("{} [default: {v}]", spec.help),
            };
            sub = sub
                .arg(Arg::new(spec.key).long(spec.key).value_name(spec.value_name).help(help).action(ArgAction::Set));
        }
        root = root.subcommand(sub);
    }
    root
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Flag,
    File,
    Default,
}

impl Source {
    fn label(self) -> &'static str {
        match self {
            Source::Flag => "flag",
            Source::File => "file",
            Source::Default => "default",
        }
    }
}

/// Parsed subcommand plus its merged options.
#[derive(Debug)]
pub struct RunConfig {
    pub command: String,
    values: BTreeMap<&'static str, (String, Source)>,
    used: RefCell<BTreeSet<&'static str>>,
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected `key = value`", i + 1)))?;
        let k = k.trim().replace('_', "-");
        if k.is_empty() {
            return Err(CliError::Config(format!("config line {}: empty key", i + 1)));
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

/// Flags override file values, which override defaults.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = command().try_get_matches_from(argv).map_err(CliError::Clap)?;
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let command = name.to_string();
    let mut values: BTreeMap<&'static str, (String, Source)> = BTreeMap::new();

    if let Some(path) = sub.get_one::<String>("config") {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::Config(format!("config: cannot read {path}: {e}")))?;
        for (k, v) in parse_config_file(&text)? {
            let spec = option(&k).ok_or_else(|| CliError::Config(format!("config: unknown key `{k}`")))?;
            if default_for(spec, &command).is_none() {
                return Err(CliError::Config(format!("config: key `{k}` does not apply to `{command}`")));
            }
            values.insert(spec.key, (v, Source::File));
        }
    }
    for key in keys_for(&command) {
        if let Some(v) = sub.get_one::<String>(key) {
            values.insert(key, (v.clone(), Source::Flag));
        }
    }
    for key in keys_for(&command) {
        let spec = option(key).expect("key from table");
        match default_for(spec, &command).expect("key applies") {
            Value(v) => {
                values.entry(key).or_insert_with(|| (v.to_string(), Source::Default));
            }
            Required if !values.contains_key(key) => {
                return Err(CliError::Config(format!("missing required key `{key}` for `{command}`")));
            }
            _ => {}
        }
    }
    Ok(RunConfig { command, values, used: RefCell::new(BTreeSet::new()) })
}

fn bad(key: &str, raw: &str, what: &str) -> CliError {
    CliError::Config(format!("invalid value `{raw}` for `{key}`: expected {what}"))
}

fn split_list(raw: &str) -> impl Iterator<Item = &str> {
    raw.split(',').map(str::trim).filter(|s| !s.is_empty())
}

impl RunConfig {
    fn raw(&self, key: &str) -> Option<&str> {
        let spec = option(key).unwrap_or_else(|| panic!("`{key}` is not in the option table"));
        assert!(default_for(spec, &self.command).is_some(), "`{key}` does not apply to `{}`", self.command);
        self.used.borrow_mut().insert(spec.key);
        self.values.get(key).map(|(v, _)| v.as_str())
    }

    fn required(&self, key: &str) -> Result<&str, CliError> {
        self.raw(key).ok_or_else(|| CliError::Config(format!("missing required key `{key}`")))
    }

    pub fn string(&self, key: &str) -> Result<String, CliError> {
        self.required(key).map(str::to_string)
    }

    pub fn opt_path(&self, key: &str) -> Option<PathBuf> {
        self.raw(key).map(PathBuf::from)
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        let raw = self.required(key)?;
        raw.parse().map_err(|_| bad(key, raw, "a number"))
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|_| bad(key, raw, "a number")),
        }
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        let raw = self.required(key)?;
        raw.parse().map_err(|_| bad(key, raw, "a single non-negative integer"))
    }

    pub fn u64(&self, key: &str) -> Result<u64, CliError> {
        let raw = self.required(key)?;
        raw.parse().map_err(|_| bad(key, raw, "a non-negative integer"))
    }

    pub fn bool(&self, key: &str) -> Result<bool, CliError> {
        let raw = self.required(key)?;
        match raw {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            _ => Err(bad(key, raw, "true or false")),
        }
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let raw = self.required(key)?;
        let v = split_list(raw)
            .map(|s| s.parse())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|_| bad(key, raw, "a comma-separated list of numbers"))?;
        if v.is_empty() {
            return Err(bad(key, raw, "a nonempty list"));
        }
        Ok(v)
    }

    pub fn usize_list(&self, key: &str) -> Result<Vec<usize>, CliError> {
        let raw = self.required(key)?;
        let v = split_list(raw)
            .map(|s| s.parse())
            .collect::<Result<Vec<usize>, _>>()
            .map_err(|_| bad(key, raw, "a comma-separated list of integers"))?;
        if v.is_empty() {
            return Err(bad(key, raw, "a nonempty list"));
        }
        Ok(v)
    }

    /// `--out`, or `default_name` inside `$NTR_OUT_DIR` (else the working directory).
    pub fn out_path(&self, default_name: &str) -> PathBuf {
        match self.opt_path("out") {
            Some(p) => p,
            None => match std::env::var_os(OUT_DIR_ENV) {
                Some(dir) if !dir.is_empty() => Path::new(&dir).join(default_name),
                _ => PathBuf::from(default_name),
            },
        }
    }

    #[cfg(test)]
    pub fn source(&self, key: &str) -> Option<Source> {
        self.values.get(key).map(|(_, s)| *s)
    }

    /// Keys read so far by the dispatcher.
    #[cfg(test)]
    pub fn used_keys(&self) -> BTreeSet<&'static str> {
        self.used.borrow().clone()
    }

    /// The effective configuration, one `key = value  # source` line per key.
    pub fn echo(&self) -> String {
        let mut s = format!("# ntr {}\n", self.command);
        for (k, (v, src)) in &self.values {
            let _ = writeln!(s, "{k} = {v}  # {}", src.label());
        }
        s
    }
}
