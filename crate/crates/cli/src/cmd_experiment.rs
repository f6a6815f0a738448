//! `ckls experiment`: dispatch one Monte Carlo study, then write
//! `summary.json`, plot-ready `plot.csv`, optional `per_rep.csv`, and the
//! run manifest into the output directory.
//!
//! Worker count never affects numbers: replications own disjoint random
//! streams and merge by replication index, so `--jobs 1` and `--jobs 8`
//! produce byte-identical summaries.

use crate::csvio::{write_per_rep_csv, write_xy_csv};
use crate::manifest::RunManifest;
use crate::{map_core, resolve_out_dir, CliError, CliResult};
use ckls_core::experiments::{
    run_ci_coverage, run_clt_beta, run_clt_elasticity, run_discretization_check,
    run_ergodic_moments, run_measure_change_check, run_plugin_negligibility, run_rate_initial_k,
    CheckResult, CltBetaConfig, CltElasticityConfig, CoverageConfig, DiscretizationConfig,
    ErgodicConfig, McSummary, MeasureChangeConfig, PluginNegligibilityConfig, RateConfig,
    RepRecord,
};
use ckls_core::numeric::normal_quantile;
use clap::{Args, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentName {
    /// Normality of the rescaled drift estimator on exactly sampled square-root paths
    CltBeta,
    /// Normality of the rescaled elasticity estimator through the full pipeline
    CltK,
    /// Mesh-rate ladder for the initial elasticity reading
    RateK,
    /// Time averages of one long path against invariant-law moments
    Ergodic,
    /// Left Riemann sums against fine-grid integrals across a mesh ladder
    Discretization,
    /// Direct versus reweighted expectations under the drift-adjusted measure
    MeasureChange,
    /// Plug-in gap between oracle and estimated initial elasticity
    Plugin,
    /// Empirical confidence-interval coverage of the elasticity pipeline
    Coverage,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Which study to run
    #[arg(long, value_enum)]
    name: ExperimentName,
    /// JSON config; omitted fields take the study's defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (0 picks the machine's core count; never affects numbers)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Master seed override
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: $CKLS_OUT_DIR, else the working directory)
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Also write every replication as per_rep.csv
    #[arg(long, default_value_t = false)]
    per_rep: bool,
}

/// What every study hands back for emission.
struct Outcome {
    summary: serde_json::Value,
    config_echo: serde_json::Value,
    master_seed: u64,
    checks: Vec<CheckResult>,
    pass: bool,
    per_rep: Vec<RepRecord>,
    plot: Vec<(f64, f64)>,
}

pub fn run(args: ExperimentArgs) -> CliResult {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Runtime(format!("building worker pool: {e}")))?;
    let outcome = pool.install(|| dispatch(&args))?;

    let out = resolve_out_dir(args.out_dir.clone())?;
    let mut outputs = vec!["summary.json".to_string(), "plot.csv".to_string()];
    if args.per_rep {
        outputs.push("per_rep.csv".to_string());
    }
    let mut manifest = RunManifest::begin(
        &format!("experiment {}", name_str(args.name)),
        outcome.master_seed,
        outcome.config_echo.clone(),
        outputs,
    );
    manifest
        .write(&out)
        .map_err(|e| CliError::Runtime(format!("writing manifest: {e}")))?;

    let mut body = serde_json::to_string_pretty(&outcome.summary)
        .map_err(|e| CliError::Runtime(format!("serializing summary: {e}")))?;
    body.push('\n');
    std::fs::write(out.join("summary.json"), body)
        .map_err(|e| CliError::Runtime(format!("writing summary.json: {e}")))?;
    write_xy_csv(&out.join("plot.csv"), &outcome.plot)
        .map_err(|e| CliError::Runtime(format!("writing plot.csv: {e}")))?;
    if args.per_rep {
        write_per_rep_csv(&out.join("per_rep.csv"), &outcome.per_rep)
            .map_err(|e| CliError::Runtime(format!("writing per_rep.csv: {e}")))?;
    }
    manifest
        .finish(&out)
        .map_err(|e| CliError::Runtime(format!("finalizing manifest: {e}")))?;

    for check in &outcome.checks {
        println!(
            "check {}: {:.6} in [{:.6}, {:.6}] -> {}",
            check.name,
            check.value,
            check.lo,
            check.hi,
            if check.pass { "pass" } else { "FAIL" }
        );
    }
    println!(
        "experiment {}: {} (artifacts in {})",
        name_str(args.name),
        if outcome.pass { "PASS" } else { "FAIL" },
        out.display()
    );
    Ok(())
}

fn name_str(name: ExperimentName) -> &'static str {
    match name {
        ExperimentName::CltBeta => "clt-beta",
        ExperimentName::CltK => "clt-k",
        ExperimentName::RateK => "rate-k",
        ExperimentName::Ergodic => "ergodic",
        ExperimentName::Discretization => "discretization",
        ExperimentName::MeasureChange => "measure-change",
        ExperimentName::Plugin => "plugin",
        ExperimentName::Coverage => "coverage",
    }
}

/// Parses the config file into the study's config type, or falls back to the
/// study defaults. Callers apply the optional master-seed override afterwards
/// because the seed field lives on each concrete config type.
fn load_config<T: DeserializeOwned + Default>(file: &Option<PathBuf>) -> CliResult<T> {
    match file {
        None => Ok(T::default()),
        Some(f) => {
            let text = std::fs::read_to_string(f)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", f.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("config {}: {e}", f.display())))
        }
    }
}

/// Applies the `--seed` override to a config's seed field.
macro_rules! override_seed {
    ($config:expr, $seed:expr) => {
        if let Some(s) = $seed {
            $config.seed = s;
        }
    };
}

fn echo<T: Serialize>(value: &T) -> CliResult<serde_json::Value> {
    serde_json::to_value(value).map_err(|e| CliError::Runtime(format!("echoing config: {e}")))
}

/// Assembles the common outcome shape for studies reporting an `McSummary`.
fn mc_outcome<C: Serialize>(
    config: &C,
    master_seed: u64,
    summary: &McSummary,
    plot: Vec<(f64, f64)>,
) -> CliResult<Outcome> {
    Ok(Outcome {
        config_echo: echo(config)?,
        master_seed,
        checks: summary.checks.clone(),
        pass: summary.pass,
        per_rep: summary.per_rep.clone(),
        plot,
        summary: echo(summary)?,
    })
}

/// Normal QQ rows: theoretical quantile at the midpoint grid against the
/// sorted standardized replication statistics.
fn qq_rows(per_rep: &[RepRecord], scale: f64) -> Vec<(f64, f64)> {
    let mut zs: Vec<f64> = per_rep.iter().map(|r| r.z / scale).collect();
    zs.sort_by(f64::total_cmp);
    let m = zs.len();
    zs.iter()
        .enumerate()
        .map(|(i, &z)| {
            let p = (i as f64 + 0.5) / m as f64;
            (normal_quantile(p).unwrap_or(f64::NAN), z)
        })
        .collect()
}

fn dispatch(args: &ExperimentArgs) -> CliResult<Outcome> {
    let seed = args.seed;
    match args.name {
        ExperimentName::CltBeta => {
            let mut config: CltBetaConfig = load_config(&args.config)?;
            override_seed!(config, seed);
            let summary = run_clt_beta(&config).map_err(map_core)?;
            let plot = qq_rows(&summary.per_rep, summary.target.sqrt());
            mc_outcome(&config, config.seed, &summary, plot)
        }
        ExperimentName::CltK => {
            let mut config: CltElasticityConfig = load_config(&args.config)?;
            override_seed!(config, seed);
            let summary = run_clt_elasticity(&config).map_err(map_core)?;
            let plot = qq_rows(&summary.per_rep, summary.target.sqrt());
            mc_outcome(&config, config.seed, &summary, plot)
        }
        ExperimentName::RateK => {
            let mut config: RateConfig = load_config(&args.config)?;
            override_seed!(config, seed);
            let report = run_rate_initial_k(&config).map_err(map_core)?;
            let plot = report
                .levels
                .iter()
                .map(|l| (l.delta.ln(), l.median_abs_error.ln()))
                .collect();
            Ok(Outcome {
                config_echo: echo(&config)?,
                master_seed: config.seed,
                checks: report.checks.clone(),
                pass: report.pass,
                per_rep: report.per_rep.clone(),
                plot,
                summary: echo(&report)?,
            })
        }
        ExperimentName::Ergodic => {
            let mut config: ErgodicConfig = load_config(&args.config)?;
            override_seed!(config, seed);
            let summary = run_ergodic_moments(&config).map_err(map_core)?;
            // One point per moment order: the time average relative to its
            // invariant-law target, so perfect agreement plots at height 1.
            let plot = config
                .orders
                .iter()
                .filter_map(|q| {
                    let avg = summary.details.get(&format!("time_average_q{q}"))?;
                    let target = summary.details.get(&format!("target_q{q}"))?;
                    Some((*q, avg / target))
                })
                .collect();
            mc_outcome(&config, config.seed, &summary, plot)
        }
        ExperimentName::Discretization => {
            let mut config: DiscretizationConfig = load_config(&args.config)?;
            override_seed!(config, seed);
            let summary = run_discretization_check(&config).map_err(map_core)?;
            let plot = (0..config.deltas.len())
                .filter_map(|li| {
                    let d = summary.details.get(&format!("delta_{li}"))?;
                    let e = summary.details.get(&format!("median_gap_q1_{li}"))?;
                    Some((d.ln(), e.ln()))
                })
                .collect();
            mc_outcome(&config, config.seed, &summary, plot)
        }
        ExperimentName::MeasureChange => {
            let mut config: MeasureChangeConfig = load_config(&args.config)?;
            override_seed!(config, seed);
            let summary = run_measure_change_check(&config).map_err(map_core)?;
            // One point per functional: direct estimate against reweighted
            // estimate; agreement puts every point on the diagonal.
            let plot = summary
                .details
                .iter()
                .filter_map(|(key, direct)| {
                    let label = key.strip_prefix("direct_")?;
                    let weighted = summary.details.get(&format!("weighted_{label}"))?;
                    Some((*direct, *weighted))
                })
                .collect();
            mc_outcome(&config, config.seed, &summary, plot)
        }
        ExperimentName::Plugin => {
            let mut config: PluginNegligibilityConfig = load_config(&args.config)?;
            override_seed!(config, seed);
            let summary = run_plugin_negligibility(&config).map_err(map_core)?;
            let plot = (0..config.omegas.len())
                .filter_map(|oi| {
                    let omega = summary.details.get(&format!("omega_{oi}"))?;
                    let gap = summary.details.get(&format!("median_abs_gap_{oi}"))?;
                    Some((*omega, *gap))
                })
                .collect();
            mc_outcome(&config, config.seed, &summary, plot)
        }
        ExperimentName::Coverage => {
            let mut config: CoverageConfig = load_config(&args.config)?;
            override_seed!(config, seed);
            let summary = run_ci_coverage(&config).map_err(map_core)?;
            // Interval z-scores are already self-normalized by the reported
            // standard error, so the QQ reference scale is 1.
            let plot = qq_rows(&summary.per_rep, 1.0);
            mc_outcome(&config, config.seed, &summary, plot)
        }
    }
}
