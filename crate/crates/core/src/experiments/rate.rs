//! Convergence-rate study for the aggregated initial elasticity reading.
//!
//! Along a geometric ladder of step sizes at fixed horizon, the median
//! absolute error of the initial reading should scale like Δ^(1/2); the
//! report fits log(median error) against log(Δ) and checks the slope.

use super::{check_budget, check_replications, run_replications, CheckResult, RepRecord};
use crate::error::{Error, Result};
use crate::estimate::{initial_k_aggregated, InitialVariant, QvWindow};
use crate::model::{CklsParams, SamplingGrid};
use crate::simulate::{simulate_ckls, SimulationConfig};
use crate::stats::{linear_fit, median, LinearFit};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Config for the step-size ladder study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RateConfig {
    pub model: CklsParams,
    pub horizon: f64,
    /// Step sizes, finest last; at least 4 levels, strictly decreasing.
    pub deltas: Vec<f64>,
    pub replications: usize,
    pub seed: u64,
    pub substeps: usize,
    pub variant: InitialVariant,
    pub epsilon: f64,
    pub window: QvWindow,
    pub x0: Option<f64>,
    /// Acceptable slope interval for the pass flag.
    pub slope_band: (f64, f64),
    pub failure_budget: f64,
}

impl Default for RateConfig {
    fn default() -> Self {
        Self {
            model: CklsParams::new(1.0, 1.0, 1.0, 0.7, 1.0).expect("valid default"),
            horizon: 10.0,
            deltas: vec![1e-2, 2.5e-3, 6.25e-4, 1.5625e-4],
            replications: 200,
            seed: 0,
            substeps: 16,
            variant: InitialVariant::Single,
            epsilon: 0.1,
            window: QvWindow::Auto,
            x0: None,
            slope_band: (0.35, 0.65),
            failure_budget: 0.01,
        }
    }
}

/// Error level at one step size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeLevel {
    pub delta: f64,
    pub median_abs_error: f64,
    pub completed: usize,
    pub failures: usize,
}

/// Outcome of a rate study: per-level medians and the log-log fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub experiment: String,
    pub levels: Vec<SlopeLevel>,
    pub fit: LinearFit,
    /// Slope predicted by the theory being checked.
    pub target_slope: f64,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
    pub details: BTreeMap<String, f64>,
    pub per_rep: Vec<RepRecord>,
}

/// Runs the ladder study for the aggregated initial elasticity reading.
pub fn run_rate_initial_k(config: &RateConfig) -> Result<SlopeReport> {
    check_replications(config.replications, 2)?;
    check_budget(config.failure_budget)?;
    if config.deltas.len() < 4 {
        return Err(Error::ConfigError {
            reason: format!("need at least 4 ladder levels, got {}", config.deltas.len()),
        });
    }
    if config
        .deltas
        .windows(2)
        .any(|w| !(w[1] < w[0]) || w[0] <= 0.0)
    {
        return Err(Error::ConfigError {
            reason: "step sizes must be positive and strictly decreasing".into(),
        });
    }
    let k0 = config.model.k();
    let sigma = config.model.sigma();
    let mut levels = Vec::with_capacity(config.deltas.len());
    let mut per_rep = Vec::new();
    let mut rep_counter = 0usize;
    for (li, &delta) in config.deltas.iter().enumerate() {
        let n = (config.horizon / delta).round() as usize;
        let grid = SamplingGrid::from_delta_n(delta, n)?;
        let (kept, failures) = run_replications(config.replications, config.failure_budget, |i| {
            let path = simulate_ckls(
                &config.model,
                &grid,
                &SimulationConfig {
                    substeps: config.substeps,
                    seed: config.seed,
                    // Streams partition by ladder level.
                    stream: (li * config.replications + i) as u64,
                    x0: config.x0,
                    ..Default::default()
                },
            )?;
            let agg =
                initial_k_aggregated(&path, Some(sigma), config.epsilon, config.variant, config.window)?;
            Ok(agg.k_hat)
        })?;
        let errors: Vec<f64> = kept.iter().map(|&(_, k)| (k - k0).abs()).collect();
        for (&(i, k_hat), &err) in kept.iter().zip(&errors) {
            per_rep.push(RepRecord {
                rep: rep_counter + i,
                seed: config.seed,
                estimate: k_hat,
                z: err,
            });
        }
        rep_counter += config.replications;
        levels.push(SlopeLevel {
            delta,
            median_abs_error: median(&errors),
            completed: kept.len(),
            failures,
        });
    }
    let xs: Vec<f64> = levels.iter().map(|l| l.delta.ln()).collect();
    let ys: Vec<f64> = levels.iter().map(|l| l.median_abs_error.ln()).collect();
    let fit = linear_fit(&xs, &ys)?;
    let mut checks = vec![
        CheckResult::bounded(
            "slope_in_band",
            fit.slope,
            config.slope_band.0,
            config.slope_band.1,
        ),
        CheckResult::bounded(
            "finest_error_below_coarsest",
            levels.last().unwrap().median_abs_error,
            0.0,
            levels.first().unwrap().median_abs_error,
        ),
    ];
    let mut details = BTreeMap::new();
    details.insert("target_slope".into(), 0.5);
    details.insert("horizon".into(), config.horizon);
    for (i, level) in levels.iter().enumerate() {
        details.insert(format!("median_abs_error_{i}"), level.median_abs_error);
        details.insert(format!("delta_{i}"), level.delta);
    }
    let pass = checks.iter().all(|c| c.pass);
    checks.shrink_to_fit();
    Ok(SlopeReport {
        experiment: "rate-k".to_string(),
        levels,
        fit,
        target_slope: 0.5,
        checks,
        pass,
        details,
        per_rep,
    })
}
