//! Plug-in error negligibility check.
//!
//! The drift statistic can be computed with the estimated elasticity or
//! with the true one. The scaled gap √(nΔ)·(β̂^(k̂₀) − β̂^(k₀)) should
//! shrink as the sampling frequency grows at fixed horizon (nΔ² → 0), so
//! its median absolute value must decrease along an ascending frequency-
//! exponent ladder.

use super::{check_budget, check_replications, run_replications, CheckResult, McSummary, RepRecord};
use crate::error::{Error, Result};
use crate::estimate::{initial_k_aggregated, plugin_beta, EstimateOptions};
use crate::model::CklsParams;
use crate::simulate::{build_grid, simulate_ckls, SimulationConfig};
use crate::stats::{median, summarize};
use serde::{Deserialize, Serialize};

/// Config for the plug-in gap ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PluginNegligibilityConfig {
    pub model: CklsParams,
    pub horizon: f64,
    /// Frequency exponents, strictly increasing, each above 1.
    pub omegas: Vec<f64>,
    pub replications: usize,
    pub seed: u64,
    pub substeps: usize,
    pub estimate: EstimateOptions,
    pub x0: Option<f64>,
    pub failure_budget: f64,
}

impl Default for PluginNegligibilityConfig {
    fn default() -> Self {
        Self {
            model: CklsParams::new(1.0, 1.0, 1.0, 0.75, 1.0).expect("valid default"),
            horizon: 50.0,
            omegas: vec![1.1, 1.5],
            replications: 100,
            seed: 0,
            substeps: 16,
            estimate: EstimateOptions::default(),
            x0: None,
            failure_budget: 0.01,
        }
    }
}

/// Runs the ladder and checks the median absolute gap decreases with omega.
pub fn run_plugin_negligibility(config: &PluginNegligibilityConfig) -> Result<McSummary> {
    check_replications(config.replications, 2)?;
    check_budget(config.failure_budget)?;
    if config.omegas.len() < 2 {
        return Err(Error::ConfigError {
            reason: "need at least two frequency exponents to compare".into(),
        });
    }
    if config.omegas[0] <= 1.0 || config.omegas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::ConfigError {
            reason: "frequency exponents must exceed 1 and increase strictly".into(),
        });
    }
    let k0 = config.model.k();
    let sigma = config.model.sigma();
    let total = config.replications * config.omegas.len();
    let mut summary = McSummary::new("plugin", total, 0);
    let mut medians = Vec::with_capacity(config.omegas.len());
    let mut gaps_all = Vec::with_capacity(total);
    for (oi, &omega) in config.omegas.iter().enumerate() {
        let grid = build_grid(config.horizon, omega)?;
        let scale = (grid.n() as f64 * grid.delta()).sqrt();
        let (kept, failures) = run_replications(config.replications, config.failure_budget, |i| {
            let path = simulate_ckls(
                &config.model,
                &grid,
                &SimulationConfig {
                    substeps: config.substeps,
                    seed: config.seed,
                    stream: (oi * config.replications + i) as u64,
                    x0: config.x0,
                    ..Default::default()
                },
            )?;
            let k_init = match config.estimate.forced_k_initial {
                Some(k) => k,
                None => initial_k_aggregated(
                    &path,
                    Some(sigma),
                    config.estimate.epsilon,
                    config.estimate.variant,
                    config.estimate.window,
                )?
                .k_hat
                .clamp(0.5, 1.0 - 1e-9),
            };
            let beta_init = plugin_beta(&path, k_init, sigma)?;
            let beta_true = plugin_beta(&path, k0, sigma)?;
            Ok(scale * (beta_init - beta_true))
        })?;
        summary.failures += failures;
        let abs_gaps: Vec<f64> = kept.iter().map(|&(_, s)| s.abs()).collect();
        for &(i, s) in &kept {
            summary.per_rep.push(RepRecord {
                rep: oi * config.replications + i,
                seed: config.seed,
                estimate: s,
                z: s,
            });
            gaps_all.push(s);
        }
        let med = median(&abs_gaps);
        medians.push(med);
        summary.details.insert(format!("omega_{oi}"), omega);
        summary.details.insert(format!("median_abs_gap_{oi}"), med);
        summary
            .details
            .insert(format!("n_delta_sq_{oi}"), grid.n_delta_sq());
    }
    summary.completed = total - summary.failures;
    for (oi, pair) in medians.windows(2).enumerate() {
        summary.checks.push(CheckResult::bounded(
            &format!("gap_shrinks_into_level_{}", oi + 1),
            pair[1],
            0.0,
            pair[0],
        ));
    }
    let stats = summarize(&gaps_all)?;
    summary.sample_mean = stats.mean;
    summary.sample_variance = stats.variance;
    summary.target = 0.0;
    summary.details.insert("horizon".into(), config.horizon);
    summary.finish();
    Ok(summary)
}
