//! `ckls estimate`: read a path CSV and run the two-stage elasticity
//! pipeline, printing the report and writing it as JSON.

use crate::csvio::read_path_csv;
use crate::manifest::RunManifest;
use crate::{map_core, resolve_out_dir, CliError, CliResult};
use ckls_core::estimate::{
    estimate_elasticity, EstimateOptions, InitialVariant, QvWindow, DEFAULT_LEVEL_EPSILON,
};
use clap::{Args, ValueEnum};
use serde_json::json;
use std::path::PathBuf;

/// How the rough initial elasticity is read off the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitialArg {
    /// Per-step sigma-normalized readings
    Single,
    /// Per-step sigma-free log-ratio readings
    Ratio,
    /// Window-aggregated sigma-normalized readings
    AggSingle,
    /// Window-aggregated sigma-free log-ratio readings
    AggRatio,
}

fn level_in_unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!(
            "confidence level must lie strictly inside (0, 1), got {v}"
        ))
    }
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Path CSV produced by `simulate` (header `t,value`, uniform time column)
    #[arg(long)]
    input: PathBuf,
    /// Known mean-reversion rate b of the power model
    #[arg(long)]
    b: f64,
    /// Known volatility scale sigma of the power model
    #[arg(long)]
    sigma: f64,
    /// Exclusion width around level 1 for the initial reading
    #[arg(long, default_value_t = DEFAULT_LEVEL_EPSILON)]
    epsilon: f64,
    /// Initial-reading strategy
    #[arg(long, value_enum, default_value_t = InitialArg::AggSingle)]
    initial: InitialArg,
    /// Two-sided confidence level in (0, 1)
    #[arg(long, value_parser = level_in_unit_interval, default_value = "0.95")]
    level: f64,
    /// Output directory for the report JSON (default: $CKLS_OUT_DIR, else the working directory)
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: EstimateArgs) -> CliResult {
    let path = read_path_csv(&args.input)?;
    let (variant, window) = match args.initial {
        InitialArg::Single => (InitialVariant::Single, QvWindow::PerStep),
        InitialArg::Ratio => (InitialVariant::Ratio, QvWindow::PerStep),
        InitialArg::AggSingle => (InitialVariant::Single, QvWindow::Auto),
        InitialArg::AggRatio => (InitialVariant::Ratio, QvWindow::Auto),
    };
    let options = EstimateOptions {
        variant,
        epsilon: args.epsilon,
        window,
        ci_level: args.level,
        forced_k_initial: None,
    };
    let report = estimate_elasticity(&path, args.b, args.sigma, &options).map_err(map_core)?;

    let config = json!({
        "input": args.input.display().to_string(),
        "b": args.b,
        "sigma": args.sigma,
        "epsilon": args.epsilon,
        "initial": initial_name(args.initial),
        "level": args.level,
        "rows": path.values().len(),
        "delta": path.delta(),
    });
    let out = resolve_out_dir(args.out.clone())?;
    let mut manifest =
        RunManifest::begin("estimate", 0, config, vec!["elasticity_report.json".into()]);
    manifest
        .write(&out)
        .map_err(|e| CliError::Runtime(format!("writing manifest: {e}")))?;
    let mut body = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Runtime(format!("serializing report: {e}")))?;
    body.push('\n');
    let file = out.join("elasticity_report.json");
    std::fs::write(&file, &body)
        .map_err(|e| CliError::Runtime(format!("writing {}: {e}", file.display())))?;
    manifest
        .finish(&out)
        .map_err(|e| CliError::Runtime(format!("finalizing manifest: {e}")))?;
    print!("{body}");
    Ok(())
}

fn initial_name(i: InitialArg) -> &'static str {
    match i {
        InitialArg::Single => "single",
        InitialArg::Ratio => "ratio",
        InitialArg::AggSingle => "agg-single",
        InitialArg::AggRatio => "agg-ratio",
    }
}
