//! Long-horizon time-average check against stationary moments.
//!
//! Simulates one long square-root diffusion path with the exact transition
//! sampler and compares time averages of integer powers with the stationary
//! Gamma-law moments.

use super::{CheckResult, McSummary, RepRecord};
use crate::error::{Error, Result};
use crate::model::{cir_stationary_moment, CirParams, SamplingGrid};
use crate::numeric::CompensatedSum;
use crate::simulate::{simulate_cir_exact, SimulationConfig};
use serde::{Deserialize, Serialize};

/// Config for the time-average study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ErgodicConfig {
    pub model: CirParams,
    pub horizon: f64,
    pub delta: f64,
    pub seed: u64,
    pub stream: u64,
    pub x0: Option<f64>,
    /// Moment orders to check (q = 0 is always exact by construction).
    pub orders: Vec<f64>,
    /// Relative tolerance on each time average.
    pub rel_tol: f64,
}

impl Default for ErgodicConfig {
    fn default() -> Self {
        Self {
            model: CirParams::new(1.0, 1.0, 2.0).expect("valid default"),
            horizon: 2000.0,
            delta: 0.01,
            seed: 0,
            stream: 0,
            x0: None,
            orders: vec![1.0, 2.0, 3.0],
            rel_tol: 0.05,
        }
    }
}

/// Runs the single-path time-average check.
pub fn run_ergodic_moments(config: &ErgodicConfig) -> Result<McSummary> {
    if !(config.rel_tol > 0.0 && config.rel_tol.is_finite()) {
        return Err(Error::ConfigError {
            reason: format!("relative tolerance must be positive, got {}", config.rel_tol),
        });
    }
    if config.orders.is_empty() {
        return Err(Error::ConfigError {
            reason: "need at least one moment order".into(),
        });
    }
    let n = (config.horizon / config.delta).round() as usize;
    let grid = SamplingGrid::from_delta_n(config.delta, n)?;
    let path = simulate_cir_exact(
        &config.model,
        &grid,
        &SimulationConfig {
            seed: config.seed,
            stream: config.stream,
            x0: config.x0,
            ..Default::default()
        },
    )?;
    let left = path.left_endpoints();
    let mut summary = McSummary::new("ergodic", 1, 0);
    for &q in &config.orders {
        let target = cir_stationary_moment(q, &config.model)?;
        let mut acc = CompensatedSum::new();
        for &x in left {
            acc.add(crate::numeric::pos_pow(x, q));
        }
        let avg = acc.total() / left.len() as f64;
        summary.checks.push(CheckResult::bounded(
            &format!("time_average_q{q}"),
            avg,
            target * (1.0 - config.rel_tol),
            target * (1.0 + config.rel_tol),
        ));
        summary.details.insert(format!("target_q{q}"), target);
        summary.details.insert(format!("time_average_q{q}"), avg);
    }
    summary.details.insert("horizon".into(), config.horizon);
    summary.details.insert("delta".into(), config.delta);
    summary.details.insert("n".into(), n as f64);
    let first_key = format!("time_average_q{}", config.orders[0]);
    let first_avg = summary.details[&first_key];
    let first_target = summary.details[&format!("target_q{}", config.orders[0])];
    summary.per_rep.push(RepRecord {
        rep: 0,
        seed: config.seed,
        estimate: first_avg,
        z: (first_avg - first_target) / first_target,
    });
    summary.target = first_target;
    // Single-path run: there is no across-replication spread to report.
    summary.sample_mean = summary.per_rep[0].estimate;
    summary.sample_variance = 0.0;
    summary.finish();
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeroth_moment_is_exact() {
        let config = ErgodicConfig {
            horizon: 5.0,
            orders: vec![0.0],
            seed: 3,
            ..Default::default()
        };
        let summary = run_ergodic_moments(&config).unwrap();
        assert!(summary.pass);
        let avg = summary.details["time_average_q0"];
        assert!((avg - 1.0).abs() < 1e-12, "q=0 average {avg}");
    }

    #[test]
    fn rejects_bad_tolerance_and_empty_orders() {
        let config = ErgodicConfig {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(run_ergodic_moments(&config).is_err());
        let config = ErgodicConfig {
            orders: vec![],
            ..Default::default()
        };
        assert!(run_ergodic_moments(&config).is_err());
    }

    #[test]
    fn medium_horizon_first_moment_lands_near_mean_level() {
        let config = ErgodicConfig {
            horizon: 400.0,
            delta: 0.02,
            orders: vec![1.0],
            rel_tol: 0.10,
            seed: 1,
            ..Default::default()
        };
        let summary = run_ergodic_moments(&config).unwrap();
        let avg = summary.details["time_average_q1"];
        let target = summary.details["target_q1"];
        assert!(
            (avg - target).abs() <= 0.10 * target,
            "time average {avg} vs stationary mean {target}"
        );
    }
}
