use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Parser;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RegChoice {
    L1,
    Lhalf,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum StrategyChoice {
    #[value(name = "closed_form")]
    ClosedForm,
    #[value(name = "prox_linear")]
    ProxLinear,
}

/// Everything one invocation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
    pub alpha: f64,
    pub mu: f64,
    pub reg: RegChoice,
    pub seed: u64,
    pub jumps: usize,
    pub noise_sigma: f64,
    pub max_iters: usize,
    pub tol: f64,
    pub strategy: StrategyChoice,
    pub output_path: PathBuf,
    pub diagnostics: bool,
    pub timestamp: bool,
    pub quiet: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 512,
            m: 256,
            lambda: 0.015,
            alpha: 10.0,
            mu: 10.0,
            reg: RegChoice::Both,
            seed: 1,
            jumps: 20,
            noise_sigma: 0.0,
            max_iters: 5000,
            tol: 1e-8,
            strategy: StrategyChoice::ClosedForm,
            output_path: PathBuf::from("badmm-out"),
            diagnostics: true,
            timestamp: true,
            quiet: false,
        }
    }
}

/// Run HADMM and/or SADMM on a seeded piecewise-constant recovery problem
/// and write per-iteration CSV traces.
#[derive(Debug, Parser)]
#[command(name = "badmm", version)]
struct Flags {
    /// Signal length
    #[arg(long)]
    n: Option<usize>,
    /// Number of measurements
    #[arg(long)]
    m: Option<usize>,
    /// Regularization weight
    #[arg(long)]
    lambda: Option<f64>,
    /// Penalty parameter
    #[arg(long)]
    alpha: Option<f64>,
    /// Bregman (proximal) weight
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, value_enum)]
    reg: Option<RegChoice>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of jumps in the ground-truth signal
    #[arg(long)]
    jumps: Option<usize>,
    /// Standard deviation of the measurement noise
    #[arg(long)]
    noise_sigma: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Relative step tolerance
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    strategy: Option<StrategyChoice>,
    /// Output directory
    #[arg(long)]
    output: Option<PathBuf>,
    /// key=value configuration file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Skip the per-iteration inequality checks
    #[arg(long)]
    no_diagnostics: bool,
    /// Leave the timestamp out of the CSV headers
    #[arg(long)]
    no_timestamp: bool,
    #[arg(long)]
    quiet: bool,
}

/// Parses command-line arguments (program name first). The `--config` file
/// is read from disk unless its contents are passed in `file`.
///
/// Precedence: flags, then file values, then defaults.
pub fn parse_config<I, T>(args: I, file: Option<&str>) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let flags = Flags::try_parse_from(args)?;
    let mut config = RunConfig::default();

    let from_disk;
    let text = match (file, &flags.config) {
        (Some(text), _) => Some(text),
        (None, Some(path)) => {
            from_disk = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Some(from_disk.as_str())
        }
        (None, None) => None,
    };
    if let Some(text) = text {
        apply_file(&mut config, text)?;
    }

    macro_rules! take {
        ($($field:ident => $target:ident),* $(,)?) => {
            $(if let Some(v) = flags.$field { config.$target = v; })*
        };
    }
    take!(
        n => n, m => m, lambda => lambda, alpha => alpha, mu => mu, reg => reg,
        seed => seed, jumps => jumps, noise_sigma => noise_sigma,
        max_iters => max_iters, tol => tol, strategy => strategy, output => output_path,
    );
    if flags.no_diagnostics {
        config.diagnostics = false;
    }
    if flags.no_timestamp {
        config.timestamp = false;
    }
    if flags.quiet {
        config.quiet = true;
    }
    validate(&config)?;
    Ok(config)
}

fn apply_file(config: &mut RunConfig, text: &str) -> Result<(), CliError> {
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "config line {}: expected key=value, got {raw:?}",
                idx + 1
            ))
        })?;
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let bad = |what: &str| {
            CliError::Usage(format!("config line {}: invalid {what} {value:?}", idx + 1))
        };
        match key.as_str() {
            "n" => config.n = parse(value).ok_or_else(|| bad("n"))?,
            "m" => config.m = parse(value).ok_or_else(|| bad("m"))?,
            "lambda" => config.lambda = parse(value).ok_or_else(|| bad("lambda"))?,
            "alpha" => config.alpha = parse(value).ok_or_else(|| bad("alpha"))?,
            "mu" => config.mu = parse(value).ok_or_else(|| bad("mu"))?,
            "seed" => config.seed = parse(value).ok_or_else(|| bad("seed"))?,
            "jumps" => config.jumps = parse(value).ok_or_else(|| bad("jumps"))?,
            "noise_sigma" => config.noise_sigma = parse(value).ok_or_else(|| bad("noise_sigma"))?,
            "max_iters" => config.max_iters = parse(value).ok_or_else(|| bad("max_iters"))?,
            "tol" => config.tol = parse(value).ok_or_else(|| bad("tol"))?,
            "diagnostics" => config.diagnostics = parse(value).ok_or_else(|| bad("diagnostics"))?,
            "output" | "output_path" => config.output_path = PathBuf::from(value),
            "reg" => config.reg = clap::ValueEnum::from_str(value, true).map_err(|_| bad("reg"))?,
            "strategy" => {
                config.strategy =
                    clap::ValueEnum::from_str(value, true).map_err(|_| bad("strategy"))?
            }
            other => {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key {other:?}",
                    idx + 1
                )))
            }
        }
    }
    Ok(())
}

fn parse<T: FromStr>(value: &str) -> Option<T> {
    value.parse().ok()
}

fn validate(c: &RunConfig) -> Result<(), CliError> {
    let fail = |msg: String| Err(CliError::Usage(msg));
    if c.n < 2 {
        return fail(format!("n must be at least 2, got {}", c.n));
    }
    if c.m == 0 {
        return fail("m must be positive".into());
    }
    for (name, value) in [("lambda", c.lambda), ("alpha", c.alpha), ("mu", c.mu)] {
        if !(value > 0.0) || !value.is_finite() {
            return fail(format!("{name} must be positive and finite, got {value}"));
        }
    }
    if !(c.noise_sigma >= 0.0) || !c.noise_sigma.is_finite() {
        return fail(format!(
            "noise-sigma must be nonnegative, got {}",
            c.noise_sigma
        ));
    }
    if !(c.tol >= 0.0) || !c.tol.is_finite() {
        return fail(format!("tol must be nonnegative, got {}", c.tol));
    }
    if c.max_iters == 0 {
        return fail("max-iters must be at least 1".into());
    }
    if c.jumps > c.n - 1 {
        return fail(format!(
            "jumps must be at most n - 1 = {}, got {}",
            c.n - 1,
            c.jumps
        ));
    }
    Ok(())
}
