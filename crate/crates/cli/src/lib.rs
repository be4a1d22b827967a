//! Command-line front end: configuration ingestion, region/sum-rate/secrecy
//! computation, bundled verification, and deterministic CSV/JSON/SVG
//! emission.
//!
//! Exit codes: 0 success, 2 configuration errors, 3 computation errors,
//! 4 verification failure.

pub mod config;
pub mod emit;
pub mod report;
pub mod verify;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use fadingbc_core as core;
use fadingbc_core::BoundKind;
use rayon::prelude::*;

use config::{Model, RunConfig};
use report::{RunReport, SumRateReport, TraceReport};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "fadingbc",
    version,
    about = "Capacity and secrecy-capacity bounds for the two-user ergodic fading Gaussian broadcast channel with partial CSIT"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Path to the TOML run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Bound selection: inner | outer | both.
    #[arg(long)]
    pub bound: Option<String>,
    /// Outer-bound policy-class restriction: free | thm4 | thm4-monotone.
    #[arg(long)]
    pub restriction: Option<String>,
    /// Number of weight directions for region tracing.
    #[arg(long)]
    pub directions: Option<usize>,
    /// Optimizer seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emission formats (comma separated): csv,json,svg.
    #[arg(long, value_delimiter = ',')]
    pub format: Option<Vec<String>>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Trace the message-capacity inner/outer bound regions.
    Region(RunArgs),
    /// Solve the sum-rate capacity by water-filling (needs order-revealing CSIT).
    Sumrate(RunArgs),
    /// Trace the secrecy rate boxes (inner, outer, and no-common-message).
    Secrecy(RunArgs),
    /// Evaluate the exactly-known capacity objects for this CSIT.
    Capacity(RunArgs),
    /// Run the bundled identity and containment suites.
    Verify {
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Re-render CSV/SVG from a stored report without recomputing.
    Emit {
        /// Path to a report.json produced by a compute subcommand.
        #[arg(long)]
        report: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = ["csv".to_string(), "json".to_string(), "svg".to_string()])]
        format: Vec<String>,
        /// Common-rate level of the SVG slice (defaults to the report config).
        #[arg(long)]
        fixed_r0: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum AppError {
    Config(String),
    Compute(String),
    VerifyFailed,
}

impl AppError {
    fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Compute(_) => EXIT_COMPUTE,
            Self::VerifyFailed => EXIT_VERIFY,
        }
    }
}

impl From<config::ConfigError> for AppError {
    fn from(e: config::ConfigError) -> Self {
        Self::Config(e.to_string())
    }
}

impl From<core::OptimError> for AppError {
    fn from(e: core::OptimError) -> Self {
        Self::Compute(e.to_string())
    }
}

impl From<emit::EmitError> for AppError {
    fn from(e: emit::EmitError) -> Self {
        Self::Compute(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        Self::Compute(format!("io error: {e}"))
    }
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let started = Instant::now();
    let outcome = match cli.cmd {
        Command::Region(args) => cmd_region(&args),
        Command::Sumrate(args) => cmd_sumrate(&args),
        Command::Secrecy(args) => cmd_secrecy(&args),
        Command::Capacity(args) => cmd_capacity(&args),
        Command::Verify { seed } => cmd_verify(seed.unwrap_or(20260810)),
        Command::Emit {
            report,
            format,
            fixed_r0,
            out,
        } => cmd_emit(&report, &format, fixed_r0, out.as_deref()),
    };
    match outcome {
        Ok(()) => {
            println!("wall_clock_ms {}", started.elapsed().as_millis());
            0
        }
        Err(e) => {
            match &e {
                AppError::Config(msg) => eprintln!("config error: {msg}"),
                AppError::Compute(msg) => eprintln!("computation error: {msg}"),
                AppError::VerifyFailed => eprintln!("verification failed"),
            }
            e.exit_code()
        }
    }
}

fn load(args: &RunArgs) -> Result<(RunConfig, Model), AppError> {
    let mut cfg = config::parse_file(&args.config)?;
    if let Some(b) = &args.bound {
        cfg.bounds.bound = b.clone();
    }
    if let Some(r) = &args.restriction {
        cfg.bounds.restriction = r.clone();
    }
    if let Some(d) = args.directions {
        cfg.optimizer.directions = d;
    }
    if let Some(s) = args.seed {
        cfg.optimizer.seed = s;
    }
    if let Some(o) = &args.out {
        cfg.output.dir = o.to_string_lossy().into_owned();
    }
    if let Some(f) = &args.format {
        cfg.output.formats = f.clone();
    }
    let model = cfg.build_model()?;
    // echo inline atoms in canonical order (sorted, duplicates merged,
    // masses normalized) so serialized configs are comparable
    if cfg.distribution.atoms.is_some() {
        cfg.distribution.atoms = Some(
            model
                .dist
                .atoms()
                .iter()
                .map(|a| {
                    (
                        config::Decimal(a.g1),
                        config::Decimal(a.g2),
                        config::Decimal(a.p),
                    )
                })
                .collect(),
        );
    }
    Ok((cfg, model))
}

fn effective_restriction(model: &Model, bound: BoundKind) -> core::OuterRestriction {
    match bound {
        BoundKind::Outer => model.restriction,
        _ => core::OuterRestriction::Free,
    }
}

/// Traces one bound with directions fanned out across threads; the ordered
/// collect keeps the merge deterministic.
pub fn trace_parallel(
    model: &Model,
    bound: BoundKind,
) -> Result<(core::RateRegion, Vec<core::SupportResult>), core::OptimError> {
    let dirs = core::direction_set(model.opts.directions);
    let restriction = effective_restriction(model, bound);
    let results: Result<Vec<_>, _> = dirs
        .par_iter()
        .map(|w| {
            core::max_weighted(
                &model.dist,
                &model.partition,
                bound,
                *w,
                restriction,
                &model.opts,
                model.power,
            )
        })
        .collect();
    let results = results?;
    let region = core::assemble_region(&results, bound);
    Ok((region, results))
}

fn selected_bounds(selection: &str, secrecy: bool) -> Result<Vec<BoundKind>, AppError> {
    let (inner, outer) = if secrecy {
        (BoundKind::SecrecyInner, BoundKind::SecrecyOuter)
    } else {
        (BoundKind::Inner, BoundKind::Outer)
    };
    match selection {
        "inner" => Ok(vec![inner]),
        "outer" => Ok(vec![outer]),
        "both" => Ok(vec![inner, outer]),
        other => Err(AppError::Config(format!(
            "unknown bound selection '{other}' (inner | outer | both)"
        ))),
    }
}

fn emit_report(cfg: &RunConfig, rep: &RunReport) -> Result<(), AppError> {
    let dir = Path::new(&cfg.output.dir);
    std::fs::create_dir_all(dir)?;
    let formats = &cfg.output.formats;
    if formats.iter().any(|f| f == "json") {
        emit::write_report_json(rep, &dir.join("report.json"))?;
    }
    for trace in &rep.traces {
        let stem = format!("{}_{}", rep.command, trace.bound);
        if formats.iter().any(|f| f == "csv") {
            emit::write_region_csv(&trace.vertices, &dir.join(format!("{stem}.csv")))?;
        }
        if formats.iter().any(|f| f == "svg") {
            emit::write_region_svg(
                trace,
                cfg.output.fixed_r0.0,
                &dir.join(format!("{stem}_slice.svg")),
            )?;
        }
    }
    Ok(())
}

fn print_trace_summary(trace: &TraceReport) {
    let sum_w = [0.0, 1.0, 1.0];
    let best_sum = trace
        .vertices
        .iter()
        .map(|v| v[0] * sum_w[0] + v[1] * sum_w[1] + v[2] * sum_w[2])
        .fold(0.0f64, f64::max);
    println!(
        "{} ({}): {} vertices, max R1+R2 = {:.6} bits",
        trace.bound,
        trace.restriction,
        trace.vertices.len(),
        best_sum
    );
}

fn cmd_region(args: &RunArgs) -> Result<(), AppError> {
    let (cfg, model) = load(args)?;
    let bounds = selected_bounds(&cfg.bounds.bound, false)?;
    let mut traces = Vec::new();
    for bound in bounds {
        let (region, results) = trace_parallel(&model, bound)?;
        traces.push(report::trace_report(
            bound,
            effective_restriction(&model, bound),
            &region,
            &results,
        ));
    }
    let rep = RunReport {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        command: "region".into(),
        config: cfg.clone(),
        traces,
        sum_rate: None,
    };
    emit_report(&cfg, &rep)?;
    for t in &rep.traces {
        print_trace_summary(t);
    }
    Ok(())
}

fn cmd_sumrate(args: &RunArgs) -> Result<(), AppError> {
    let (cfg, model) = load(args)?;
    let (phi, value) = core::waterfill_sumrate(&model.dist, &model.partition, model.power, 1e-9)?;
    let rep = RunReport {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        command: "sumrate".into(),
        config: cfg.clone(),
        traces: vec![],
        sum_rate: Some(SumRateReport {
            phi,
            value_bits: value,
        }),
    };
    emit_report(&cfg, &rep)?;
    println!("{value:.6} bits");
    Ok(())
}

fn cmd_secrecy(args: &RunArgs) -> Result<(), AppError> {
    let (cfg, model) = load(args)?;
    let mut bounds = selected_bounds(&cfg.bounds.bound, true)?;
    bounds.push(BoundKind::SecrecyOuterNoCommon);
    let mut traces = Vec::new();
    for bound in bounds {
        let (region, results) = trace_parallel(&model, bound)?;
        traces.push(report::trace_report(
            bound,
            effective_restriction(&model, bound),
            &region,
            &results,
        ));
    }
    let rep = RunReport {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        command: "secrecy".into(),
        config: cfg.clone(),
        traces,
        sum_rate: None,
    };
    emit_report(&cfg, &rep)?;
    for t in &rep.traces {
        print_trace_summary(t);
    }
    Ok(())
}

fn cmd_capacity(args: &RunArgs) -> Result<(), AppError> {
    let (cfg, model) = load(args)?;
    let perfect = model.partition.is_perfect();
    let order = core::csit_refines_order(&model.dist, &model.partition);
    let mut traces = Vec::new();
    let mut sum_rate = None;
    if perfect {
        // inner and outer coincide: the traced outer region is the capacity
        // region, and likewise for secrecy
        for bound in [BoundKind::Outer, BoundKind::SecrecyOuter] {
            let (region, results) = trace_parallel(&model, bound)?;
            traces.push(report::trace_report(
                bound,
                core::OuterRestriction::Free,
                &region,
                &results,
            ));
        }
        println!("perfect CSIT: traced regions are the capacity and secrecy-capacity regions");
    } else if order {
        let (phi, value) =
            core::waterfill_sumrate(&model.dist, &model.partition, model.power, 1e-9)?;
        sum_rate = Some(SumRateReport {
            phi,
            value_bits: value,
        });
        let (region, results) = trace_parallel(&model, BoundKind::SecrecyOuterNoCommon)?;
        traces.push(report::trace_report(
            BoundKind::SecrecyOuterNoCommon,
            core::OuterRestriction::Free,
            &region,
            &results,
        ));
        println!(
            "order-revealing CSIT: sum-rate capacity {:.6} bits; no-common-message secrecy capacity region traced",
            sum_rate.as_ref().unwrap().value_bits
        );
    } else {
        return Err(AppError::Compute(
            "capacity is only characterized for perfect or order-revealing CSIT".into(),
        ));
    }
    let rep = RunReport {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        command: "capacity".into(),
        config: cfg.clone(),
        traces,
        sum_rate,
    };
    emit_report(&cfg, &rep)?;
    for t in &rep.traces {
        print_trace_summary(t);
    }
    Ok(())
}

fn cmd_verify(seed: u64) -> Result<(), AppError> {
    let outcomes = verify::run_all(seed);
    let mut all_pass = true;
    for o in &outcomes {
        println!(
            "suite {}: {} ({})",
            o.name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        all_pass &= o.pass;
    }
    if all_pass {
        Ok(())
    } else {
        Err(AppError::VerifyFailed)
    }
}

fn cmd_emit(
    report_path: &Path,
    formats: &[String],
    fixed_r0: Option<f64>,
    out: Option<&Path>,
) -> Result<(), AppError> {
    let text = std::fs::read_to_string(report_path)
        .map_err(|e| AppError::Config(format!("cannot read report: {e}")))?;
    let rep = report::from_json(&text)
        .map_err(|e| AppError::Config(format!("cannot parse report: {e}")))?;
    let dir = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from(&rep.config.output.dir));
    std::fs::create_dir_all(&dir)?;
    let r0 = fixed_r0.unwrap_or(rep.config.output.fixed_r0.0);
    for trace in &rep.traces {
        let stem = format!("{}_{}", rep.command, trace.bound);
        if formats.iter().any(|f| f == "csv") {
            emit::write_region_csv(&trace.vertices, &dir.join(format!("{stem}.csv")))?;
        }
        if formats.iter().any(|f| f == "svg") {
            emit::write_region_svg(trace, r0, &dir.join(format!("{stem}_slice.svg")))?;
        }
        if formats.iter().any(|f| f == "json") {
            emit::write_report_json(&rep, &dir.join("report.json"))?;
        }
    }
    Ok(())
}
