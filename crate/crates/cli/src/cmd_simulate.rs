//! `ckls simulate`: sample one path of either model family onto a uniform
//! grid and write it as `t,value` CSV next to its manifest.

use crate::csvio::write_path_csv;
use crate::manifest::RunManifest;
use crate::{map_core, resolve_out_dir, CliError, CliResult};
use ckls_core::simulate::{
    simulate_cir_euler, simulate_cir_exact, simulate_ckls, Scheme, SimulationConfig,
};
use ckls_core::{CirParams, CklsParams, Path, SamplingGrid};
use clap::{Args, ValueEnum};
use serde_json::json;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    /// Power model d lambda = (a - b lambda) dt + sigma lambda^k dW
    Ckls,
    /// Square-root model d X = (alpha - beta X) dt + gamma sqrt(X) dW
    Cir,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    /// Euler step with the negative part truncated in drift and diffusion
    FullTruncation,
    /// Euler step with reflection at zero
    Reflection,
    /// Exact square-root transition sampling (square-root model, or the power model at k = 1/2)
    ExactCir,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::FullTruncation => Scheme::FullTruncation,
            SchemeArg::Reflection => Scheme::Reflection,
            SchemeArg::ExactCir => Scheme::ExactCir,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Model family to simulate
    #[arg(long, value_enum, default_value_t = ModelKind::Ckls)]
    model: ModelKind,
    /// Power-model drift constant a
    #[arg(long)]
    a: Option<f64>,
    /// Power-model mean-reversion rate b
    #[arg(long)]
    b: Option<f64>,
    /// Power-model volatility scale sigma
    #[arg(long)]
    sigma: Option<f64>,
    /// Power-model volatility elasticity k, admissible for 1/2 <= k < 1
    #[arg(long)]
    k: Option<f64>,
    /// Power-model auxiliary scale L of the level map
    #[arg(long = "L", default_value_t = 1.0)]
    l: f64,
    /// Square-root-model drift constant alpha
    #[arg(long)]
    alpha: Option<f64>,
    /// Square-root-model mean-reversion rate beta
    #[arg(long)]
    beta: Option<f64>,
    /// Square-root-model volatility gamma
    #[arg(long)]
    gamma: Option<f64>,
    /// Observation horizon T; with --omega sets Delta = T^-omega, n = floor(T^(omega+1))
    #[arg(long = "T")]
    horizon: Option<f64>,
    /// Frequency exponent omega (pairs with --T)
    #[arg(long)]
    omega: Option<f64>,
    /// Fixed observation step (pairs with --n)
    #[arg(long)]
    delta: Option<f64>,
    /// Number of observation steps (pairs with --delta)
    #[arg(long)]
    n: Option<usize>,
    /// Discretization scheme
    #[arg(long, value_enum, default_value_t = SchemeArg::FullTruncation)]
    scheme: SchemeArg,
    /// Euler substeps per observation step (ignored by exact-cir)
    #[arg(long, default_value_t = 1)]
    substeps: usize,
    /// Master seed of the random stream
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stream index under the master seed (for families of paths)
    #[arg(long, default_value_t = 0)]
    stream: u64,
    /// Starting level (defaults to the model's long-run mean)
    #[arg(long)]
    x0: Option<f64>,
    /// Output directory (default: $CKLS_OUT_DIR, else the working directory)
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: SimulateArgs) -> CliResult {
    let grid = resolve_grid(&args)?;
    let sim = SimulationConfig {
        substeps: args.substeps,
        scheme: args.scheme.into(),
        seed: args.seed,
        stream: args.stream,
        x0: args.x0,
    };
    let (path, model_echo) = build_and_simulate(&args, &grid, &sim)?;

    let config = json!({
        "model": model_echo,
        "grid": {
            "delta": grid.delta(),
            "n": grid.n(),
            "horizon": grid.horizon(),
            "omega": args.omega,
        },
        "scheme": scheme_name(args.scheme),
        "substeps": args.substeps,
        "seed": args.seed,
        "stream": args.stream,
        "x0": path.values()[0],
    });

    let out = resolve_out_dir(args.out.clone())?;
    let mut manifest = RunManifest::begin("simulate", args.seed, config, vec!["path.csv".into()]);
    manifest
        .write(&out)
        .map_err(|e| CliError::Runtime(format!("writing manifest: {e}")))?;
    let csv = out.join("path.csv");
    write_path_csv(&csv, &path)
        .map_err(|e| CliError::Runtime(format!("writing {}: {e}", csv.display())))?;
    manifest
        .finish(&out)
        .map_err(|e| CliError::Runtime(format!("finalizing manifest: {e}")))?;
    println!(
        "wrote {} ({} rows, delta = {:.6e}) and {}",
        csv.display(),
        path.values().len(),
        path.delta(),
        out.join("manifest.json").display()
    );
    Ok(())
}

fn scheme_name(s: SchemeArg) -> &'static str {
    match s {
        SchemeArg::FullTruncation => "full-truncation",
        SchemeArg::Reflection => "reflection",
        SchemeArg::ExactCir => "exact-cir",
    }
}

fn resolve_grid(args: &SimulateArgs) -> CliResult<SamplingGrid> {
    match (args.horizon, args.omega, args.delta, args.n) {
        (Some(t), Some(omega), None, None) => {
            SamplingGrid::from_horizon_omega(t, omega).map_err(CliError::usage)
        }
        (None, None, Some(delta), Some(n)) => {
            SamplingGrid::from_delta_n(delta, n).map_err(CliError::usage)
        }
        _ => Err(CliError::Usage(
            "specify the grid as --T with --omega, or --delta with --n (not a mixture)".into(),
        )),
    }
}

fn build_and_simulate(
    args: &SimulateArgs,
    grid: &SamplingGrid,
    sim: &SimulationConfig,
) -> CliResult<(Path, serde_json::Value)> {
    match args.model {
        ModelKind::Ckls => {
            if args.alpha.is_some() || args.beta.is_some() || args.gamma.is_some() {
                return Err(CliError::Usage(
                    "--alpha/--beta/--gamma belong to --model cir; the power model takes --a --b --sigma --k [--L]".into(),
                ));
            }
            let (a, b, sigma, k) = match (args.a, args.b, args.sigma, args.k) {
                (Some(a), Some(b), Some(s), Some(k)) => (a, b, s, k),
                _ => {
                    return Err(CliError::Usage(
                        "--model ckls requires --a, --b, --sigma and --k".into(),
                    ))
                }
            };
            let model = CklsParams::new(a, b, sigma, k, args.l).map_err(CliError::usage)?;
            let path = simulate_ckls(&model, grid, sim).map_err(map_core)?;
            let echo = json!({
                "family": "ckls", "a": a, "b": b, "sigma": sigma, "k": k, "L": args.l,
            });
            Ok((path, echo))
        }
        ModelKind::Cir => {
            if args.a.is_some() || args.b.is_some() || args.sigma.is_some() || args.k.is_some() {
                return Err(CliError::Usage(
                    "--a/--b/--sigma/--k belong to --model ckls; the square-root model takes --alpha --beta --gamma".into(),
                ));
            }
            let (alpha, beta, gamma) = match (args.alpha, args.beta, args.gamma) {
                (Some(al), Some(be), Some(ga)) => (al, be, ga),
                _ => {
                    return Err(CliError::Usage(
                        "--model cir requires --alpha, --beta and --gamma".into(),
                    ))
                }
            };
            let model = CirParams::new(alpha, beta, gamma).map_err(CliError::usage)?;
            let path = if args.scheme == SchemeArg::ExactCir {
                simulate_cir_exact(&model, grid, sim).map_err(map_core)?
            } else {
                simulate_cir_euler(&model, grid, sim).map_err(map_core)?
            };
            let echo = json!({
                "family": "cir", "alpha": alpha, "beta": beta, "gamma": gamma,
            });
            Ok((path, echo))
        }
    }
}
