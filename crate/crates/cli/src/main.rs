use anyhow::Result;
use clap::{Parser, Subcommand};
use entropy_greedy_cli::config::Config;
use entropy_greedy_cli::experiments::{lp_example, oga_bounds, pde, rbm_theorem2};
use entropy_greedy_cli::report::ExperimentReport;
use std::path::PathBuf;
use std::process::ExitCode;

/// Reproducible experiments for greedy reduced bases, orthogonal greedy
/// approximation, and elliptic snapshot manifolds.
#[derive(Parser)]
#[command(name = "egx", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Greedy selection on random Euclidean clouds against entropy bounds.
    RbmTheorem2(RunArgs),
    /// Weighted-coordinate construction in l^p and the entropy rate it pins.
    LpExample(RunArgs),
    /// Orthogonal greedy residual bounds, best n-term floors, ReLU rates.
    OgaBounds(RunArgs),
    /// Elliptic solver anchors, snapshot manifolds, perturbation ratios.
    Pde(RunArgs),
    /// Run all four experiments with default configs into out/selftest.
    Selftest,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Flat key-value config file (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the greedy depth.
    #[arg(long)]
    nmax: Option<usize>,
    /// Override the weak-greedy parameter.
    #[arg(long)]
    gamma: Option<f64>,
    /// Override the exponent key (accepts `inf`).
    #[arg(long)]
    p: Option<String>,
}

impl RunArgs {
    fn load(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        if let Some(s) = self.seed {
            cfg.set("seed", s.to_string());
        }
        if let Some(o) = &self.out {
            cfg.set("out_dir", o.display().to_string());
        }
        if let Some(n) = self.nmax {
            cfg.set("n_max", n.to_string());
        }
        if let Some(g) = self.gamma {
            cfg.set("gamma", g.to_string());
        }
        if let Some(p) = &self.p {
            cfg.set("p", p.as_str());
        }
        Ok(cfg)
    }
}

fn finish(report: ExperimentReport) -> ExitCode {
    report.print_summary();
    if report.all_hard_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

type Runner = fn(&Config) -> Result<ExperimentReport>;

fn selftest() -> Result<ExitCode> {
    let runs: [(&str, Runner); 4] = [
        ("rbm-theorem2", rbm_theorem2::run),
        ("lp-example", lp_example::run),
        ("oga-bounds", oga_bounds::run),
        ("pde", pde::run),
    ];
    let mut ok = true;
    for (name, runner) in runs {
        let mut cfg = Config::default();
        cfg.set("out_dir", format!("out/selftest/{name}"));
        let report = runner(&cfg)?;
        report.print_summary();
        ok &= report.all_hard_pass();
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::RbmTheorem2(a) => Ok(finish(rbm_theorem2::run(&a.load()?)?)),
        Cmd::LpExample(a) => Ok(finish(lp_example::run(&a.load()?)?)),
        Cmd::OgaBounds(a) => Ok(finish(oga_bounds::run(&a.load()?)?)),
        Cmd::Pde(a) => Ok(finish(pde::run(&a.load()?)?)),
        Cmd::Selftest => selftest(),
    }
}
