//! The configuration-driven experiment runner behind the `bergman-lab`
//! binary: every module surfaces as a subcommand emitting deterministic
//! CSV or JSON.
//!
//! Exit codes: 0 on pass, 1 on check failure, 2 on config error, 3 on
//! numeric non-convergence. Randomness is used only for sample-point
//! selection, always through the given seed, which is echoed in reports.

mod checks;
mod config;
mod output;

pub use config::{parse_grid, parse_halfplane_f, parse_points, parse_radial_weight, ConfigFile};
pub use output::{
    consolidate, csv_document, emit, write_atomic, CheckResult, ConsolidatedReport, RunReport,
};

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::bekolle::{ap_sweep, ApValue, DiscFamily};
use crate::error::{LabError, Result};
use crate::inflation::{make_domain, DomainWeight};
use crate::moments::build_table;
use crate::numerics::TruncationPolicy;
use crate::projector::{dyadic_grid, min_k, ratio_sweep};

use config::{resolve, resolve_opt};

#[derive(Parser, Debug)]
#[command(
    name = "bergman-lab",
    version,
    about = "Weighted Bergman projection laboratory: moments, blow-up ratios, A_p^+ sweeps, kernel and inflation identity checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate the moment function of a radial weight as CSV
    Moments(MomentsArgs),
    /// Sweep the projection blow-up ratio R_k(m) as CSV
    Ratio(RatioArgs),
    /// Sweep the Bekolle-Bonami A_p^+ quantity over a disc family as CSV
    ApSweep(ApSweepArgs),
    /// Run the kernel identity battery, emitting a JSON pass/fail report
    KernelCheck(KernelCheckArgs),
    /// Run the Hartogs inflation identity battery, emitting a JSON report
    InflateCheck(InflateCheckArgs),
    /// Consolidate JSON reports into one summary
    Report(ReportArgs),
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    /// Radial weight spec, e.g. power:t=1 or dostanic:A=0,B=1,alpha=1
    #[arg(long)]
    pub weight: Option<String>,
    /// Evaluation grid start:end[:step] or a single value
    #[arg(long)]
    pub x: Option<String>,
    /// Quadrature tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct RatioArgs {
    #[arg(long)]
    pub weight: Option<String>,
    /// Lebesgue exponent p in (1, inf)
    #[arg(long)]
    pub p: Option<f64>,
    /// Frequency multiplier k; defaults to the smallest admissible k for p in (1,2)
    #[arg(long)]
    pub k: Option<usize>,
    /// Largest m of the dyadic grid {1, 2, 4, ...}
    #[arg(long = "m-max")]
    pub m_max: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct ApSweepArgs {
    /// Half-plane family spec: zeta_pow:p0=... or remark35[:p0=...]
    #[arg(long)]
    pub weight: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Geometric grid depth: centers {0, ±2^j}, radii {2^j}, |j| <= depth
    #[arg(long = "grid-depth")]
    pub grid_depth: Option<i32>,
    /// Relative tolerance per disc integral
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct KernelCheckArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InflateCheckArgs {
    /// Radial base weight of the Hartogs domain
    #[arg(long)]
    pub mu: Option<String>,
    /// Semicolon-separated complex points re,im;re,im used pairwise as (z,t)
    #[arg(long)]
    pub points: Option<String>,
    /// Truncation policy as max-terms=..,tail-tol=..[,consecutive=..]
    #[arg(long)]
    pub policy: Option<String>,
    /// Series tail tolerance (overrides --policy)
    #[arg(long = "tail-tol")]
    pub tail_tol: Option<f64>,
    /// Series term budget (overrides --policy)
    #[arg(long = "max-terms")]
    pub max_terms: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// RunReport JSON files to merge
    pub paths: Vec<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn load_config(path: &Option<PathBuf>, subcommand: &str) -> Result<ConfigFile> {
    let cfg = match path {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    cfg.check_subcommand(subcommand)?;
    Ok(cfg)
}

fn run_moments(args: &MomentsArgs) -> Result<RunReport> {
    let cfg = load_config(&args.config, "moments")?;
    let weight_spec: String = resolve(&args.weight, &cfg, "weight", None)?;
    let grid_spec: String = resolve(&args.x, &cfg, "x", Some("0:50".to_string()))?;
    let tol: f64 = resolve(&args.tol, &cfg, "tol", Some(1e-12))?;
    let seed: u64 = resolve(&args.seed, &cfg, "seed", Some(0))?;
    let output = resolve_opt(&args.output, &cfg, "output")?.or(args.output.clone());

    let weight = parse_radial_weight(&weight_spec)?;
    let xs = parse_grid(&grid_spec)?;
    let started = Instant::now();
    let table = build_table(&weight, &xs, tol)?;

    let rows: Vec<String> = table
        .entries
        .iter()
        .map(|e| format!("{},{},{},{}", e.x, e.value, e.log_value, e.abs_error))
        .collect();
    emit(&output, &csv_document("x,phi,log_phi,abs_err", &rows))?;

    let mut echo = BTreeMap::new();
    echo.insert("weight".into(), weight_spec);
    echo.insert("x".into(), grid_spec);
    echo.insert("tol".into(), tol.to_string());
    let mut report = RunReport::new("moments", seed, echo);
    // phi must be positive and strictly decreasing on an increasing grid
    let mut worst = 0.0f64;
    for pair in table.entries.windows(2) {
        if pair[1].x > pair[0].x {
            worst = worst.max(pair[1].log_value - pair[0].log_value);
        }
    }
    report.push(CheckResult::timed(
        "phi_strictly_decreasing",
        started,
        worst,
        0.0,
    ));
    Ok(report)
}

fn run_ratio(args: &RatioArgs) -> Result<RunReport> {
    let cfg = load_config(&args.config, "ratio")?;
    let weight_spec: String = resolve(&args.weight, &cfg, "weight", None)?;
    let p: f64 = resolve(&args.p, &cfg, "p", None)?;
    let m_max: usize = resolve(&args.m_max, &cfg, "m-max", Some(256))?;
    let seed: u64 = resolve(&args.seed, &cfg, "seed", Some(0))?;
    let k = match resolve_opt(&args.k, &cfg, "k")? {
        Some(k) => k,
        None => min_k(p).map_err(|_| {
            LabError::Config(format!(
                "--k is required for p = {p} (the default only exists for p in (1,2))"
            ))
        })?,
    };
    let output = resolve_opt(&args.output, &cfg, "output")?.or(args.output.clone());

    let weight = parse_radial_weight(&weight_spec)?;
    let started = Instant::now();
    let series = ratio_sweep(&weight, p, k, &dyadic_grid(m_max));
    if let Some((m, err)) = series.failures.first() {
        return Err(LabError::NonConvergence(format!("m={m}: {err}")));
    }

    let rows: Vec<String> = series
        .points
        .iter()
        .map(|pt| format!("{},{},{}", pt.m, pt.r, pt.log_r))
        .collect();
    emit(&output, &csv_document("m,R,log_R", &rows))?;

    let mut echo = BTreeMap::new();
    echo.insert("weight".into(), weight_spec);
    echo.insert("p".into(), p.to_string());
    echo.insert("k".into(), k.to_string());
    echo.insert("m-max".into(), m_max.to_string());
    let mut report = RunReport::new("ratio", seed, echo);
    let finite = series.points.iter().all(|pt| pt.r.is_finite() && pt.r > 0.0);
    report.push(CheckResult::timed(
        "ratios_positive_finite",
        started,
        if finite { 0.0 } else { 1.0 },
        0.0,
    ));
    Ok(report)
}

fn run_ap_sweep(args: &ApSweepArgs) -> Result<RunReport> {
    let cfg = load_config(&args.config, "ap-sweep")?;
    let weight_spec: String = resolve(&args.weight, &cfg, "weight", None)?;
    let p: f64 = resolve(&args.p, &cfg, "p", None)?;
    let depth: i32 = resolve(&args.grid_depth, &cfg, "grid-depth", Some(6))?;
    let tol: f64 = resolve(&args.tol, &cfg, "tol", Some(1e-6))?;
    let seed: u64 = resolve(&args.seed, &cfg, "seed", Some(0))?;
    let output = resolve_opt(&args.output, &cfg, "output")?.or(args.output.clone());

    let family = parse_halfplane_f(&weight_spec)?;
    let mu = family.ap_weight(p);
    let started = Instant::now();
    let report_data = ap_sweep(&mu, p, &DiscFamily { depth }, tol)?;

    let rows: Vec<String> = report_data
        .per_disc
        .iter()
        .map(|d| {
            let (q, verdict) = match d.value {
                ApValue::Finite(v) => (v.to_string(), "finite"),
                ApValue::Divergent => ("inf".to_string(), "divergent"),
            };
            format!("{},{},{},{},{}", d.disc.x0, d.disc.radius, d.case, q, verdict)
        })
        .collect();
    emit(&output, &csv_document("x0,R,case,quantity,verdict", &rows))?;

    let mut echo = BTreeMap::new();
    echo.insert("weight".into(), weight_spec);
    echo.insert("p".into(), p.to_string());
    echo.insert("grid-depth".into(), depth.to_string());
    echo.insert("tol".into(), tol.to_string());
    let mut report = RunReport::new("ap-sweep", seed, echo);
    // quantities are bounded below by 1 (Hoelder); record the worst violation
    let worst = report_data
        .per_disc
        .iter()
        .filter_map(|d| d.value.finite())
        .map(|q| (1.0 - q).max(0.0))
        .fold(0.0f64, f64::max);
    report.push(CheckResult::timed(
        "quantities_bounded_below_by_one",
        started,
        worst,
        1e-6,
    ));
    let sup = match report_data.supremum {
        ApValue::Finite(v) => v,
        ApValue::Divergent => f64::INFINITY,
    };
    report.config.insert("supremum".into(), sup.to_string());
    if let Some(d) = report_data.argmax {
        report
            .config
            .insert("argmax".into(), format!("x0={},R={}", d.x0, d.radius));
    }
    Ok(report)
}

fn run_kernel_check(args: &KernelCheckArgs) -> Result<RunReport> {
    let cfg = load_config(&args.config, "kernel-check")?;
    let seed: u64 = resolve(&args.seed, &cfg, "seed", Some(0))?;
    let output = resolve_opt(&args.output, &cfg, "output")?.or(args.output.clone());
    let mut report = RunReport::new("kernel-check", seed, BTreeMap::new());
    checks::kernel_checks(&mut report, seed)?;
    emit(&output, &report.to_json())?;
    Ok(report)
}

/// Parses `max-terms=..,tail-tol=..[,consecutive=..]` onto a base policy.
fn parse_policy(spec: &str, mut base: TruncationPolicy) -> Result<TruncationPolicy> {
    for item in spec.split(',') {
        let Some((k, v)) = item.split_once('=') else {
            return Err(LabError::Config(format!(
                "policy component {item:?} is not key=value"
            )));
        };
        let v = v.trim();
        match k.trim() {
            "max-terms" => {
                base.max_terms = v
                    .parse()
                    .map_err(|e| LabError::Config(format!("policy max-terms={v:?}: {e}")))?
            }
            "tail-tol" => {
                base.tail_tol = v
                    .parse()
                    .map_err(|e| LabError::Config(format!("policy tail-tol={v:?}: {e}")))?
            }
            "consecutive" => {
                base.consecutive_small = v
                    .parse()
                    .map_err(|e| LabError::Config(format!("policy consecutive={v:?}: {e}")))?
            }
            other => {
                return Err(LabError::Config(format!(
                    "unknown policy key {other:?} (allowed: max-terms, tail-tol, consecutive)"
                )))
            }
        }
    }
    Ok(base)
}

fn run_inflate_check(args: &InflateCheckArgs) -> Result<RunReport> {
    let cfg = load_config(&args.config, "inflate-check")?;
    let mu_spec: String = resolve(&args.mu, &cfg, "mu", Some("power:t=0".to_string()))?;
    let points_spec: String = resolve(
        &args.points,
        &cfg,
        "points",
        Some("0.3,0;0.1,0;0.4,0;0.2,0".to_string()),
    )?;
    let mut policy = TruncationPolicy {
        max_terms: 400,
        tail_tol: 1e-12,
        consecutive_small: 3,
    };
    // --policy comes through the flag only; config files use the
    // individual tail-tol/max-terms keys
    if let Some(spec) = &args.policy {
        policy = parse_policy(spec, policy)?;
    }
    if let Some(t) = resolve_opt(&args.tail_tol, &cfg, "tail-tol")? {
        policy.tail_tol = t;
    }
    if let Some(m) = resolve_opt(&args.max_terms, &cfg, "max-terms")? {
        policy.max_terms = m;
    }
    let tail_tol = policy.tail_tol;
    let max_terms = policy.max_terms;
    let seed: u64 = resolve(&args.seed, &cfg, "seed", Some(0))?;
    let output = resolve_opt(&args.output, &cfg, "output")?.or(args.output.clone());

    let weight = parse_radial_weight(&mu_spec)?;
    let points = parse_points(&points_spec)?;
    let domain = make_domain(DomainWeight::Radial(weight));

    let mut echo = BTreeMap::new();
    echo.insert("mu".into(), mu_spec);
    echo.insert("points".into(), points_spec);
    echo.insert("tail-tol".into(), tail_tol.to_string());
    echo.insert("max-terms".into(), max_terms.to_string());
    let mut report = RunReport::new("inflate-check", seed, echo);
    checks::inflate_checks(&mut report, &domain, &points, &policy, seed)?;
    emit(&output, &report.to_json())?;
    Ok(report)
}

fn run_report(args: &ReportArgs) -> Result<bool> {
    let merged = consolidate(&args.paths)?;
    let text = serde_json::to_string_pretty(&merged).expect("serializes") + "\n";
    emit(&args.output, &text)?;
    Ok(merged.overall_pass)
}

/// Parses argv and runs; returns the process exit code.
pub fn main_with(argv: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version through this path as well
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome: Result<bool> = match &cli.command {
        Command::Moments(a) => run_moments(a).map(|r| r.overall_pass),
        Command::Ratio(a) => run_ratio(a).map(|r| r.overall_pass),
        Command::ApSweep(a) => run_ap_sweep(a).map(|r| r.overall_pass),
        Command::KernelCheck(a) => run_kernel_check(a).map(|r| r.overall_pass),
        Command::InflateCheck(a) => run_inflate_check(a).map(|r| r.overall_pass),
        Command::Report(a) => run_report(a),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
