//! `anosov-tangent <subcommand> --config cfg.json [--flag ...]`

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anosov_core::torus::TrigPoly;
use anosov_core::trees::RestrictMode;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::{EpsSpec, PsiSpec, RunConfig};

#[derive(Parser)]
#[command(name = "anosov-tangent", version, about = "Stable-manifold tangent slopes from tree series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand)]
enum Command {
    /// Slope v_eps(psi) with its per-order table and the oracle comparison (JSON).
    Slope,
    /// Slopes over a grid of points (CSV).
    SlopeField,
    /// Conjugacy terms h^(k) and the truncated H_eps (JSON).
    HExpansion,
    /// Finite-t quotients q_n(t) against Val[q_n(0)] (CSV).
    Qnt,
    /// Per-order majorants and the radius estimate (JSON).
    Bound,
    /// Stable direction by pull-back iteration (JSON).
    Oracle,
    /// Tree counts for one order (CSV).
    Trees {
        /// Node count; defaults to K.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run the acceptance suite and write a pass/fail report (JSON).
    Verify,
}

/// Every flag mirrors a config key and overrides the file.
#[derive(Args)]
struct Overrides {
    /// JSON config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Integer matrix `a,b,c,d` (row major).
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    matrix: Option<Vec<i64>>,
    /// Perturbation as a JSON list of `{n, re, im}` records.
    #[arg(long, global = true)]
    coeffs: Option<String>,
    /// One eps or a comma-separated sweep.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    eps: Option<Vec<f64>>,
    /// Point `theta1,theta2`.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    psi: Option<Vec<f64>>,
    /// Uniform grid `n1,n2`.
    #[arg(long, global = true, value_delimiter = ',', conflicts_with_all = ["psi", "random"])]
    grid: Option<Vec<usize>>,
    /// Number of seeded random points.
    #[arg(long, global = true, conflicts_with = "psi")]
    random: Option<usize>,
    /// Series order.
    #[arg(long = "K", global = true)]
    order: Option<usize>,
    #[arg(long, global = true)]
    pmax: Option<u32>,
    #[arg(long, global = true, value_delimiter = ',')]
    t_list: Option<Vec<f64>>,
    #[arg(long, global = true)]
    restrict_mode: Option<RestrictMode>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Allow eps beyond the estimated radius.
    #[arg(long, global = true)]
    force: bool,
    #[arg(long, global = true)]
    n_iters: Option<usize>,
}

impl Overrides {
    fn apply(&self, mut c: RunConfig) -> Result<RunConfig, String> {
        let arity = |name: &str, v: &Option<Vec<_>>, n: usize| match v {
            Some(v) if v.len() != n => Err(format!("--{name} takes {n} comma-separated values")),
            _ => Ok(()),
        };
        arity("matrix", &self.matrix.as_ref().map(|v| v.iter().map(|x| *x as f64).collect()), 4)?;
        arity("psi", &self.psi, 2)?;
        arity("grid", &self.grid.as_ref().map(|v| v.iter().map(|x| *x as f64).collect()), 2)?;
        if let Some(m) = &self.matrix {
            c.matrix = [[m[0], m[1]], [m[2], m[3]]];
        }
        if let Some(s) = &self.coeffs {
            c.coeffs = serde_json::from_str::<TrigPoly>(s).map_err(|e| format!("--coeffs: {e}"))?;
        }
        if let Some(e) = &self.eps {
            c.eps = if e.len() == 1 { EpsSpec::One(e[0]) } else { EpsSpec::Sweep(e.clone()) };
        }
        if let Some(p) = &self.psi {
            c.psi = PsiSpec::Point([p[0], p[1]]);
        }
        if let Some(g) = &self.grid {
            c.psi = PsiSpec::Grid { grid: [g[0], g[1]] };
        }
        if let Some(n) = self.random {
            c.psi = PsiSpec::Random { random: n };
        }
        if let Some(k) = self.order {
            c.k = k;
        }
        if let Some(p) = self.pmax {
            c.pmax = p;
        }
        if let Some(t) = &self.t_list {
            c.t_list = t.clone();
        }
        if let Some(m) = self.restrict_mode {
            c.restrict_mode = m;
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(d) = &self.out_dir {
            c.out_dir = Some(d.clone());
        }
        c.force |= self.force;
        if let Some(n) = self.n_iters {
            c.n_iters = n;
        }
        Ok(c)
    }
}

fn diagnostic(kind: &str, message: &str, code: u8) -> ExitCode {
    eprintln!("{}", json!({"error": kind, "message": message, "exit_code": code}));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    anosov_core::init_threads();
    let cfg = match cli.overrides.config.as_deref().map(RunConfig::load).unwrap_or_else(|| Ok(RunConfig::default())) {
        Ok(c) => c,
        Err(e) => return diagnostic("ConfigError", &e, 2),
    };
    let cfg = match cli.overrides.apply(cfg).and_then(|c| c.validate().map(|_| c)) {
        Ok(c) => c,
        Err(e) => return diagnostic("ConfigError", &e, 2),
    };
    match commands::run(&cli.command, &cfg) {
        Ok(code) => code,
        Err(commands::Failure::Core(e)) => {
            diagnostic(e.kind(), &e.to_string(), if e.is_validation() { 2 } else { 3 })
        }
        Err(commands::Failure::Io(e)) => diagnostic("IoError", &e, 3),
    }
}
