//! CSV traces and the run summary.
//!
//! A trace file starts with `#`-prefixed `key=value` metadata lines, then the
//! header row, then one row per iteration. Floats are written with 17
//! significant digits so they parse back to the identical `f64`. Missing
//! values are empty fields.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use badmm::{AnalysisConstants, IterationRecord, Termination};

use crate::{CliError, RunConfig};

pub const CSV_HEADER: &str = "k,L_alpha,L_hat,primal_residual,dx,dy,dp,mse_x,mse_y,m10,m11,mAux,stat_grad_x,stat_subdiff_y,stat_primal";

/// Metadata written at the top of a trace.
#[derive(Debug, Clone)]
pub struct RunMeta<'a> {
    pub config: &'a RunConfig,
    pub solver: &'a str,
    pub mu0: f64,
    pub mu_b: f64,
    pub ell_f: f64,
    pub ell_phi: f64,
    pub constants: Option<&'a AnalysisConstants>,
    pub termination: Option<Termination>,
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Renders the whole CSV document.
pub fn render_csv(trace: &[IterationRecord], meta: &RunMeta) -> String {
    let c = meta.config;
    let mut out = String::new();
    let mut line = |key: &str, value: String| {
        let _ = writeln!(out, "# {key}={value}");
    };
    line("solver", meta.solver.to_string());
    line("n", c.n.to_string());
    line("m", c.m.to_string());
    line("lambda", num(c.lambda));
    line("alpha", num(c.alpha));
    line("mu", num(c.mu));
    line("seed", c.seed.to_string());
    line("jumps", c.jumps.to_string());
    line("noise_sigma", num(c.noise_sigma));
    line("max_iters", c.max_iters.to_string());
    line("tol", num(c.tol));
    line(
        "strategy",
        match c.strategy {
            crate::StrategyChoice::ClosedForm => "closed_form",
            crate::StrategyChoice::ProxLinear => "prox_linear",
        }
        .into(),
    );
    line("diagnostics", c.diagnostics.to_string());
    line("mu0", num(meta.mu0));
    line("mu_B", num(meta.mu_b));
    line("ell_f", num(meta.ell_f));
    line("ell_phi", num(meta.ell_phi));
    let k = meta.constants;
    line("sigma0", opt(k.map(|k| k.sigma0)));
    line("sigma1", opt(k.map(|k| k.sigma1)));
    line("alpha_lower_bound", opt(k.map(|k| k.alpha_bound.bound)));
    line(
        "alpha_rule",
        k.map(|k| {
            if k.alpha_bound.satisfied {
                "pass"
            } else {
                "fail"
            }
        })
        .unwrap_or("")
        .into(),
    );
    if let Some(t) = meta.termination {
        line(
            "termination",
            match t {
                Termination::StepTolerance => "step_tolerance",
                Termination::MaxIters => "max_iters",
            }
            .into(),
        );
    }
    line("iterations", trace.len().to_string());
    if c.timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        line("timestamp_unix", secs.to_string());
    }

    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in trace {
        let d = r.diagnostics;
        let m = d.and_then(|d| d.margins);
        let s = d.map(|d| d.stationarity);
        let fields = [
            r.k.to_string(),
            num(r.l_alpha),
            opt(r.l_hat),
            num(r.primal_residual),
            num(r.dx),
            num(r.dy),
            num(r.dp),
            opt(r.mse_x),
            opt(r.mse_y),
            opt(m.map(|m| m.m10)),
            opt(m.map(|m| m.m11)),
            opt(m.map(|m| m.m_aux)),
            opt(s.map(|s| s.grad_x)),
            opt(s.map(|s| s.subdiff_y)),
            opt(s.map(|s| s.primal)),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn emit_csv(trace: &[IterationRecord], meta: &RunMeta, path: &Path) -> Result<(), CliError> {
    write_file(path, &render_csv(trace, meta))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
