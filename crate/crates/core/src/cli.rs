//! Command-line front end: `run`, `audit`, `fixed-point`, `decompose`.
//!
//! Exit codes: 0 success, 1 configuration error, 2 blow-up, 3 audit
//! violation.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::auditor::run_battery;
use crate::config::{finalize, parse_config, Config};
use crate::dynamics::{make_initial_data, run_coupled, RunOutcome};
use crate::error::{Error, Result};
use crate::estimates::solve_a;
use crate::fft::{to_real, to_spectral};
use crate::field::{l2_inner, l2_norm_sq, Rank};
use crate::grid::Grid;
use crate::helmholtz::{decompose, recompose};
use crate::io;
use crate::ops::{curl, divergence, gradient};

#[derive(Parser)]
#[command(
    name = "nstorus",
    version,
    about = "Pseudo-spectral solver and estimate-audit laboratory for periodic incompressible flow"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the coupled pair; write a manifest and the time-series CSV
    Run(CommonArgs),
    /// Simulate, then audit the chain's identities and inequalities
    Audit(AuditArgs),
    /// Solve the fixed-point equation, optionally over a nu sweep
    FixedPoint(FixedPointArgs),
    /// Split a stored vector field into its gradient and rotational potentials
    Decompose(DecomposeArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Configuration file; documented defaults apply when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory override
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed override
    #[arg(long)]
    seed: Option<u64>,
    /// Bulk-viscosity override
    #[arg(long)]
    nu: Option<f64>,
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated audit identifiers (defaults to the config list or all)
    #[arg(long)]
    check: Option<String>,
}

#[derive(Args)]
struct FixedPointArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Sweep specification, e.g. "nu=10,100,1000"
    #[arg(long)]
    sweep: Option<String>,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Input field file (binary layout, vector rank)
    #[arg(long)]
    field: PathBuf,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Entry point taking argv without the program name; returns the exit code.
pub fn run_cli<I: IntoIterator<Item = String>>(argv: I) -> i32 {
    let args = std::iter::once("nstorus".to_string()).chain(argv);
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are successful exits
            if e.use_stderr() {
                eprint!("{e}");
                return 1;
            }
            print!("{e}");
            return 0;
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Audit(args) => cmd_audit(args),
        Command::FixedPoint(args) => cmd_fixed_point(args),
        Command::Decompose(args) => cmd_decompose(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BlowUp { .. } => 2,
                _ => 1,
            }
        }
    }
}

fn load_config(common: &CommonArgs) -> Result<Config> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            parse_config(&text)?
        }
        None => {
            let mut cfg = Config::default();
            finalize(&mut cfg)?;
            cfg
        }
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(nu) = common.nu {
        cfg.params.nu = nu;
        finalize(&mut cfg)?;
    }
    if let Some(out) = &common.out {
        cfg.output_dir = out.display().to_string();
    }
    Ok(cfg)
}

fn ensure_out_dir(cfg: &Config) -> Result<PathBuf> {
    let dir = PathBuf::from(&cfg.output_dir);
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn simulate_and_write(cfg: &Config, dir: &Path) -> Result<crate::dynamics::Trajectory> {
    let started = Instant::now();
    let spec = cfg.run_spec();
    let grid = Grid::new(cfg.grid_n)?;
    let (big_v0, v0, report) =
        make_initial_data(&spec.scenario, &spec.params, grid, spec.seed)?;
    let trajectory = run_coupled(&spec)?;
    io::write_timeseries(&trajectory, &dir.join("timeseries.csv"))?;
    let notes = format!(
        "scenario.phi0_lp_measured = {:e}\nscenario.u0_h1 = {:e}\nscenario.grad_phi0_h1 = {:e}\n",
        report.phi0_lp, report.u0_h1, report.grad_phi0_h1
    );
    io::write_manifest(
        &dir.join("manifest.txt"),
        &cfg.echo(),
        started.elapsed().as_secs_f64(),
        &io::field_hash(&to_real(&big_v0)?),
        &io::field_hash(&to_real(&v0)?),
        trajectory.outcome,
        &notes,
    )?;
    Ok(trajectory)
}

fn cmd_run(common: CommonArgs) -> Result<i32> {
    let cfg = load_config(&common)?;
    let dir = ensure_out_dir(&cfg)?;
    let trajectory = simulate_and_write(&cfg, &dir)?;
    match trajectory.outcome {
        RunOutcome::Completed => {
            println!(
                "run complete: {} samples, outputs in {}",
                trajectory.samples.len(),
                dir.display()
            );
            Ok(0)
        }
        RunOutcome::BlownUp { step, t } => {
            eprintln!("run blew up at step {step} (t = {t:e}); partial outputs written");
            Ok(2)
        }
    }
}

fn cmd_audit(args: AuditArgs) -> Result<i32> {
    let mut cfg = load_config(&args.common)?;
    if let Some(list) = &args.check {
        cfg.checks = Some(
            list.split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect(),
        );
        finalize(&mut cfg)?;
    }
    let dir = ensure_out_dir(&cfg)?;
    let trajectory = simulate_and_write(&cfg, &dir)?;
    let reports = run_battery(&trajectory, &cfg.estimates, cfg.checks.as_deref())?;
    io::write_audit_reports(&reports, &dir.join("audit_report.txt"))?;
    print!("{}", io::render_audit_reports(&reports));
    if let RunOutcome::BlownUp { step, t } = trajectory.outcome {
        eprintln!("run blew up at step {step} (t = {t:e}); audits cover the partial trajectory");
        return Ok(2);
    }
    if reports.iter().any(|r| r.is_violated()) {
        return Ok(3);
    }
    Ok(0)
}

fn parse_sweep(s: &str) -> Result<Vec<f64>> {
    let body = s.strip_prefix("nu=").ok_or_else(|| Error::Config {
        key: "sweep".into(),
        reason: format!("expected `nu=v1,v2,...`, got `{s}`"),
    })?;
    let mut out = Vec::new();
    for tok in body.split(',') {
        let v: f64 = tok.trim().parse().map_err(|_| Error::Config {
            key: "sweep".into(),
            reason: format!("cannot parse `{tok}` as a number"),
        })?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::Config {
            key: "sweep".into(),
            reason: "empty sweep".into(),
        });
    }
    Ok(out)
}

fn cmd_fixed_point(args: FixedPointArgs) -> Result<i32> {
    let cfg = load_config(&args.common)?;
    let dir = ensure_out_dir(&cfg)?;
    let nus = match &args.sweep {
        Some(s) => parse_sweep(s)?,
        None => vec![cfg.params.nu],
    };
    let mut rows = Vec::new();
    for &nu in &nus {
        let mut est = cfg.estimates.clone();
        est.nu = nu;
        est.phi0_lp = match cfg.phi0_lp_override {
            Some(v) => v,
            None => est.default_phi0_lp(),
        };
        est.validate()?;
        let result = solve_a(&est);
        println!(
            "nu = {nu:e}: A = {:e}, iterations = {}, contraction_modulus = {:e}, converged = {}{}",
            result.a,
            result.iterations,
            result.contraction_modulus,
            result.converged,
            result
                .detail
                .as_ref()
                .map(|d| format!(" ({d})"))
                .unwrap_or_default()
        );
        rows.push((nu, result));
    }
    io::write_fixed_point_csv(&rows, &dir.join("fixed_point.csv"))?;
    Ok(0)
}

fn cmd_decompose(args: DecomposeArgs) -> Result<i32> {
    let dir = args.out.unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&dir)?;
    let field = io::read_field(&args.field)?;
    if field.rank != Rank::Vector3 {
        return Err(Error::Usage(
            "decompose expects a vector field file".into(),
        ));
    }
    let v = to_spectral(&field)?;
    let pots = decompose(&v)?;
    io::write_field(&to_real(&pots.phi)?, &dir.join("phi.fld"))?;
    io::write_field(&to_real(&pots.psi)?, &dir.join("psi.fld"))?;

    let grad = gradient(&pots.phi)?;
    let rot = curl(&pots.psi)?;
    let vv = l2_norm_sq(&v);
    let cross = l2_inner(&grad, &rot);
    let pythagoras = l2_norm_sq(&grad) + l2_norm_sq(&rot) - vv;
    let div_psi = divergence(&pots.psi)?.max_abs();
    let recomposed = recompose(&pots)?;
    let recompose_err = recomposed.sub(&v).max_abs();
    let report = format!(
        "grid_n = {}\n|v|_2^2 = {:e}\n|grad phi|_2^2 = {:e}\n|rot psi|_2^2 = {:e}\n\
         orthogonality <grad phi, rot psi> / |v|_2^2 = {:e}\n\
         pythagoras deficit / |v|_2^2 = {:e}\n\
         max |div psi| = {:e}\n\
         max recompose error = {:e}\n",
        field.grid.n(),
        vv,
        l2_norm_sq(&grad),
        l2_norm_sq(&rot),
        cross / vv.max(1e-300),
        pythagoras / vv.max(1e-300),
        div_psi,
        recompose_err,
    );
    std::fs::write(dir.join("decompose_report.txt"), &report)?;
    print!("{report}");
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn unknown_subcommand_exits_one() {
        assert_eq!(run_cli(argv(&["frobnicate"])), 1);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_cli(argv(&["--help"])), 0);
    }

    #[test]
    fn sweep_parser_accepts_lists() {
        assert_eq!(parse_sweep("nu=10,100,1000").unwrap(), vec![10.0, 100.0, 1000.0]);
        assert!(parse_sweep("mu=1").is_err());
        assert!(parse_sweep("nu=ten").is_err());
    }
}
