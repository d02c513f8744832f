//! Batch driver for the stochastic gradient flow laboratory.
//!
//! Parses experiment configs (flat key-value files plus flag overrides),
//! dispatches studies, manages seeds and worker pools, and emits CSV/JSON
//! artifacts with a self-verifying manifest. No interactive surface: the
//! outputs are files plus a short console report.

// parameter guards are written as `!(x > 0.0)` so NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod describe;
pub mod output;
pub mod studies;

use std::path::PathBuf;

use thiserror::Error;

pub use config::Config;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad config, unknown name, inconsistent problem data. Exit code 2.
    #[error("validation error: {0}")]
    Validation(String),
    /// Numeric failure inside a study (divergence, failed invariant, fit
    /// without data). Exit code 3.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// Artifact I/O failure. Exit code 3.
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<sgflab_core::SgfError> for CliError {
    fn from(e: sgflab_core::SgfError) -> Self {
        use sgflab_core::SgfError::*;
        match e {
            InvalidProblem(_) | InvalidParameter(_) | Unsupported(_) | OutOfRange(_) => {
                CliError::Validation(e.to_string())
            }
            NumericFailure { .. } | Divergence { .. } | FitError(_) => {
                CliError::Numeric(e.to_string())
            }
        }
    }
}

/// Parsed command line.
#[derive(Debug)]
pub enum Command {
    Run(Config),
    Describe(String),
    Help,
}

const FLAG_MAP: &[(&str, &str)] = &[
    ("--study", "study"),
    ("--problem", "problem.name"),
    ("--eigenvalues", "problem.eigenvalues"),
    ("--center", "problem.center"),
    ("--r", "problem.r"),
    ("--l1-weight", "problem.l1_weight"),
    ("--sigma0", "vol.sigma0"),
    ("--alpha", "vol.alpha"),
    ("--vol-kind", "vol.kind"),
    ("--x0", "x0"),
    ("--T", "T"),
    ("--level", "level"),
    ("--paths", "paths"),
    ("--stride", "stride"),
    ("--seed", "seed"),
    ("--workers", "workers"),
    ("--out", "out"),
    ("--quantity", "estimate.quantity"),
    ("--bound", "estimate.bound"),
    ("--lambda", "bound.lambda"),
    ("--fit", "fit.model"),
    ("--fit-lo", "fit.lo"),
    ("--fit-hi", "fit.hi"),
    ("--levels", "order.levels"),
    ("--thetas", "sweep.thetas"),
    ("--epsilon", "sweep.epsilon"),
    ("--mu", "coco.mu"),
    ("--samples", "check.samples"),
    ("--theta", "sim.theta"),
];

/// Parses the argument vector (without the binary name).
pub fn parse_args(args: &[String]) -> Result<Command, CliError> {
    let mut it = args.iter().peekable();
    let sub = match it.next() {
        None => return Ok(Command::Help),
        Some(s) => s.as_str(),
    };
    match sub {
        "help" | "--help" | "-h" => Ok(Command::Help),
        "describe" => {
            let name = it.next().ok_or_else(|| {
                CliError::Validation("describe needs a study or problem name".into())
            })?;
            Ok(Command::Describe(name.clone()))
        }
        "run" => {
            // first pass: locate --config so flags can overlay file values
            let rest: Vec<&String> = it.collect();
            let mut config = Config::default();
            let mut i = 0;
            while i < rest.len() {
                if rest[i] == "--config" {
                    let path = rest.get(i + 1).ok_or_else(|| {
                        CliError::Validation("--config needs a file path".into())
                    })?;
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| CliError::Validation(format!("reading {path}: {e}")))?;
                    config = Config::parse(&text)?;
                    break;
                }
                i += 1;
            }
            let mut i = 0;
            let mut seed_from_flags = false;
            while i < rest.len() {
                let flag = rest[i].as_str();
                if flag == "--config" {
                    i += 2;
                    continue;
                }
                if flag == "--set" {
                    let kv = rest.get(i + 1).ok_or_else(|| {
                        CliError::Validation("--set needs key=value".into())
                    })?;
                    let (k, v) = kv.split_once('=').ok_or_else(|| {
                        CliError::Validation(format!("--set expects key=value, got '{kv}'"))
                    })?;
                    if k.trim() == "seed" {
                        seed_from_flags = true;
                    }
                    config.set(k.trim(), v.trim());
                    i += 2;
                    continue;
                }
                match FLAG_MAP.iter().find(|(f, _)| *f == flag) {
                    Some((_, key)) => {
                        let value = rest.get(i + 1).ok_or_else(|| {
                            CliError::Validation(format!("{flag} needs a value"))
                        })?;
                        if *key == "seed" {
                            seed_from_flags = true;
                        }
                        config.set(key, value.as_str());
                        i += 2;
                    }
                    None => {
                        let known: Vec<&str> = FLAG_MAP.iter().map(|(f, _)| *f).collect();
                        return Err(CliError::Validation(format!(
                            "unknown flag '{flag}'; known flags: --config, --set, {}",
                            known.join(", ")
                        )));
                    }
                }
            }
            // SGFLAB_SEED overrides a config-file seed; any seed given on the
            // command line wins over the environment
            if !seed_from_flags {
                if let Ok(env_seed) = std::env::var("SGFLAB_SEED") {
                    config.set("seed", env_seed);
                }
            }
            Ok(Command::Run(config))
        }
        other => Err(CliError::Validation(format!(
            "unknown command '{other}'; use 'run', 'describe' or 'help'"
        ))),
    }
}

pub const HELP: &str = "sgflab - stochastic gradient flow laboratory

USAGE:
    sgflab run [--config FILE] [flags...]     run a study, write artifacts
    sgflab describe <study|problem>           print parameters and the bound a study verifies
    sgflab help

Common flags (each maps onto a config key; flags override the file):
    --study NAME       simulate | estimate | order | theta-sweep | coco | conjecture | check
    --problem NAME     quadratic | power | composite
    --sigma0 S --alpha A --vol-kind K (constant|decreasing|multiplicative|zero)
    --x0 LIST --T HORIZON --level L --paths N --stride K
    --seed N --workers W --out DIR
    --set key=value    set any config key directly

Seed precedence: --seed flag > SGFLAB_SEED env > config file > default 0xC0FFEE.
Exit codes: 0 success, 2 validation error, 3 numeric failure.
";

/// Runs a full command line; returns console output to print.
pub fn execute(args: &[String]) -> Result<String, CliError> {
    match parse_args(args)? {
        Command::Help => Ok(HELP.to_string()),
        Command::Describe(name) => describe::describe(&name),
        Command::Run(config) => {
            let out_dir = PathBuf::from(config.str_or("out", "out"));
            let workers = config.usize_or("workers", 0)?;
            if workers == 0 {
                studies::run_study(&config, &out_dir)
            } else {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .map_err(|e| CliError::Validation(format!("worker pool: {e}")))?;
                pool.install(|| studies::run_study(&config, &out_dir))
            }
        }
    }
}
