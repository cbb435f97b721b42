//! Experiment runner behind the `badmm` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod output;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::thread;

use badmm::problems::make_tv_problem;
use badmm::solver::solve;
use badmm::{RegKind, SolveOutput, SolverConfig, SolverState, TvProblemSpec, YStrategy};

pub use config::{parse_config, RegChoice, RunConfig, StrategyChoice};
pub use output::{emit_csv, render_csv, RunMeta, CSV_HEADER};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Args(#[from] clap::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{solver}: {source}")]
    Solver {
        solver: &'static str,
        source: badmm::Error,
    },
}

impl CliError {
    /// 0 for help/version, 1 usage, 2 I/O, 3 solver failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Args(e) => match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            },
            CliError::Usage(_) => 1,
            CliError::Io { .. } => 2,
            CliError::Solver { .. } => 3,
        }
    }
}

/// Result of one solver run.
#[derive(Debug)]
pub struct SolverRun {
    pub name: &'static str,
    pub output: SolveOutput,
    pub mu0: f64,
    pub mu_b: f64,
    pub ell_f: f64,
}

fn solver_name(reg: RegKind) -> &'static str {
    match reg {
        RegKind::L1 => "sadmm",
        RegKind::LHalf => "hadmm",
    }
}

fn run_one(config: &RunConfig, reg: RegKind) -> Result<SolverRun, CliError> {
    let name = solver_name(reg);
    let wrap = |source| CliError::Solver {
        solver: name,
        source,
    };
    let spec = TvProblemSpec {
        n: config.n,
        m: config.m,
        lambda: config.lambda,
        reg,
        seed: config.seed,
        noise_sigma: config.noise_sigma,
        jumps: config.jumps,
        ..TvProblemSpec::default()
    };
    let (problem, truth) = make_tv_problem(&spec).map_err(wrap)?;
    let mut solver_config = match config.strategy {
        StrategyChoice::ClosedForm => SolverConfig::closed_form_for(reg, config.alpha, config.mu),
        StrategyChoice::ProxLinear => SolverConfig::with_strategy(
            config.alpha,
            config.mu,
            YStrategy::ProxLinearY { mu: config.mu },
        ),
    }
    .map_err(wrap)?;
    solver_config.max_iters = config.max_iters;
    solver_config.tol = config.tol;
    solver_config.record_diagnostics = config.diagnostics;
    let output = solve(
        &problem,
        &solver_config,
        &SolverState::zeros(&problem),
        Some(&truth),
    )
    .map_err(wrap)?;
    Ok(SolverRun {
        name,
        output,
        mu0: problem.mu0(),
        mu_b: problem.mu_b(),
        ell_f: problem.loss().ell_f(),
    })
}

/// Builds the instance, runs the requested solvers (concurrently for
/// `reg = both`), and writes `<solver>.csv` plus `summary.txt` into the
/// output directory.
pub fn run_experiment(config: &RunConfig) -> Result<Vec<SolverRun>, CliError> {
    let regs: Vec<RegKind> = match config.reg {
        RegChoice::L1 => vec![RegKind::L1],
        RegChoice::Lhalf => vec![RegKind::LHalf],
        RegChoice::Both => vec![RegKind::LHalf, RegKind::L1],
    };
    fs::create_dir_all(&config.output_path).map_err(|source| CliError::Io {
        path: config.output_path.clone(),
        source,
    })?;

    let results: Vec<Result<SolverRun, CliError>> = thread::scope(|scope| {
        let handles: Vec<_> = regs
            .iter()
            .map(|&reg| scope.spawn(move || run_one(config, reg)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    let runs = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    for run in &runs {
        let meta = RunMeta {
            config,
            solver: run.name,
            mu0: run.mu0,
            mu_b: run.mu_b,
            ell_f: run.ell_f,
            ell_phi: config.mu,
            constants: run.output.constants.as_ref(),
            termination: Some(run.output.termination),
        };
        let path = config.output_path.join(format!("{}.csv", run.name));
        emit_csv(&run.output.trace, &meta, &path)?;
    }
    let summary = render_summary(config, &runs);
    output::write_file(&config.output_path.join("summary.txt"), &summary)?;
    if !config.quiet {
        print!("{summary}");
    }
    Ok(runs)
}

/// Human-readable digest of the runs.
pub fn render_summary(config: &RunConfig, runs: &[SolverRun]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "n={} m={} lambda={} alpha={} mu={} seed={} jumps={} noise_sigma={}",
        config.n,
        config.m,
        config.lambda,
        config.alpha,
        config.mu,
        config.seed,
        config.jumps,
        config.noise_sigma
    );
    for run in runs {
        let out = &run.output;
        let _ = writeln!(s, "\n[{}]", run.name);
        let _ = writeln!(s, "iterations: {} ({:?})", out.trace.len(), out.termination);
        if let (Some(first), Some(last)) = (out.trace.first(), out.trace.last()) {
            let _ = writeln!(
                s,
                "step norm: first {:.3e}, final {:.3e}",
                first.dz(),
                last.dz()
            );
            let _ = writeln!(s, "final L_alpha: {:.10e}", last.l_alpha);
            if let (Some(mx), Some(my)) = (last.mse_x, last.mse_y) {
                let _ = writeln!(s, "final mse_x: {mx:.6e}  mse_y: {my:.6e}");
            }
            if let Some(d) = last.diagnostics {
                let st = d.stationarity;
                let _ = writeln!(
                    s,
                    "final stationarity: grad_x {:.3e}, subdiff_y {:.3e}, primal {:.3e}",
                    st.grad_x, st.subdiff_y, st.primal
                );
            }
            let margins: Vec<_> = out
                .trace
                .iter()
                .filter_map(|r| r.diagnostics.and_then(|d| d.margins).map(|m| (r, m)))
                .collect();
            if !margins.is_empty() {
                let min10 = margins
                    .iter()
                    .map(|(r, m)| m.m10 / (1.0 + r.l_alpha.abs()))
                    .fold(f64::INFINITY, f64::min);
                let min11 = margins
                    .iter()
                    .filter(|(r, _)| r.k >= 2)
                    .map(|(r, m)| m.m11 / (1.0 + r.dp * r.dp))
                    .fold(f64::INFINITY, f64::min);
                let aux_neg = margins.iter().filter(|(_, m)| m.m_aux < 0.0).count();
                let _ = writeln!(
                    s,
                    "min scaled m10: {min10:.3e}; min scaled m11 (k >= 2): {min11:.3e}; \
                     negative mAux: {aux_neg}/{}",
                    margins.len()
                );
            }
        }
        if let Some(c) = &out.constants {
            let _ =
                writeln!(
                s,
                "mu0 {:.6e}, ell_f {:.6e}, sigma0 {:.6e}, sigma1 {:.6e}, alpha bound {:.6e} ({})",
                c.inputs.mu0,
                c.inputs.ell_f,
                c.sigma0,
                c.sigma1,
                c.alpha_bound.bound,
                if c.alpha_bound.satisfied { "satisfied" } else { "violated" }
            );
        }
    }

    let find = |name| runs.iter().find(|r| r.name == name);
    if let (Some(h), Some(sa)) = (find("hadmm"), find("sadmm")) {
        let mse =
            |r: &SolverRun| -> Vec<f64> { r.output.trace.iter().filter_map(|t| t.mse_y).collect() };
        let (hm, sm) = (mse(h), mse(sa));
        if let (Some(hl), Some(sl)) = (hm.last(), sm.last()) {
            let common = hm.len().min(sm.len());
            let ahead = hm.iter().zip(&sm).filter(|(a, b)| a <= b).count();
            let _ = writeln!(s, "\n[comparison]");
            let _ = writeln!(s, "final mse_y: hadmm {hl:.6e}, sadmm {sl:.6e}");
            let _ = writeln!(
                s,
                "lower final mse_y: {}",
                if hl <= sl { "hadmm" } else { "sadmm" }
            );
            let _ = writeln!(
                s,
                "hadmm mse_y <= sadmm mse_y at {ahead} of {common} shared iterations"
            );
        }
    }
    s
}
