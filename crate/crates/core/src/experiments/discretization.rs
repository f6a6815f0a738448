//! Left-Riemann integration error across observation step sizes.
//!
//! For integrals of the level and squared level over a fixed horizon, the
//! experiment measures how far the coarse-grid left-Riemann sum sits from a
//! much finer Riemann sum on the same exact path, across a geometric step
//! ladder, then fits the log-log error slope.
//!
//! With zero volatility the path is the deterministic mean-reversion flow
//! and the gap has a closed form (geometric sums), which module tests check
//! to roundoff.

use super::{check_budget, check_replications, run_replications, CheckResult, McSummary, RepRecord};
use crate::error::{Error, Result};
use crate::model::{CirParams, Path, SamplingGrid};
use crate::numeric::CompensatedSum;
use crate::simulate::{simulate_cir_exact, SimulationConfig};
use crate::stats::{linear_fit, median};
use serde::{Deserialize, Serialize};

/// Config for the integration-error ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DiscretizationConfig {
    pub model: CirParams,
    pub horizon: f64,
    /// Coarse observation steps, strictly decreasing, at least 4 levels.
    pub deltas: Vec<f64>,
    /// Fine-grid refinement factor per coarse step.
    pub refine: usize,
    pub replications: usize,
    pub seed: u64,
    pub x0: Option<f64>,
    pub slope_band: (f64, f64),
    pub failure_budget: f64,
}

impl Default for DiscretizationConfig {
    fn default() -> Self {
        Self {
            model: CirParams::new(1.0, 1.0, 1.0).expect("valid default"),
            horizon: 10.0,
            deltas: vec![1e-2, 2.5e-3, 6.25e-4, 1.5625e-4],
            refine: 64,
            replications: 20,
            seed: 0,
            x0: None,
            slope_band: (0.35, 0.65),
            failure_budget: 0.01,
        }
    }
}

/// Left-Riemann sum of the q-th power of the left endpoints.
fn riemann(path: &Path, q: i32) -> f64 {
    let mut acc = CompensatedSum::new();
    for &x in path.left_endpoints() {
        acc.add(x.powi(q));
    }
    acc.total() * path.grid().delta()
}

/// Runs the ladder study; the pass flag reflects monotone shrinkage and the
/// configured slope band for both integrands.
pub fn run_discretization_check(config: &DiscretizationConfig) -> Result<McSummary> {
    check_replications(config.replications, 1)?;
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
    if config.refine < 2 {
        return Err(Error::ConfigError {
            reason: format!("refinement factor must be at least 2, got {}", config.refine),
        });
    }
    // One "replication" per (ladder level, path) pair.
    let total = config.replications * config.deltas.len();
    let mut summary = McSummary::new("discretization", total, 0);
    let mut med_q1 = Vec::with_capacity(config.deltas.len());
    let mut med_q2 = Vec::with_capacity(config.deltas.len());
    for (li, &delta) in config.deltas.iter().enumerate() {
        let n_coarse = (config.horizon / delta).round() as usize;
        let fine = SamplingGrid::from_delta_n(delta / config.refine as f64, n_coarse * config.refine)?;
        let (kept, failures) = run_replications(config.replications, config.failure_budget, |i| {
            let path = simulate_cir_exact(
                &config.model,
                &fine,
                &SimulationConfig {
                    seed: config.seed,
                    stream: (li * config.replications + i) as u64,
                    x0: config.x0,
                    ..Default::default()
                },
            )?;
            let coarse = path.subsample(config.refine)?;
            let gap_q1 = (riemann(&coarse, 1) - riemann(&path, 1)).abs();
            let gap_q2 = (riemann(&coarse, 2) - riemann(&path, 2)).abs();
            Ok((gap_q1, gap_q2))
        })?;
        summary.failures += failures;
        let e1: Vec<f64> = kept.iter().map(|&(_, (g1, _))| g1).collect();
        let e2: Vec<f64> = kept.iter().map(|&(_, (_, g2))| g2).collect();
        // Per-rep record: the q=1 gap as the estimate, the q=2 gap alongside.
        for &(i, (g1, g2)) in &kept {
            summary.per_rep.push(RepRecord {
                rep: li * config.replications + i,
                seed: config.seed,
                estimate: g1,
                z: g2,
            });
        }
        med_q1.push(median(&e1));
        med_q2.push(median(&e2));
        summary.details.insert(format!("delta_{li}"), delta);
        summary
            .details
            .insert(format!("median_gap_q1_{li}"), *med_q1.last().unwrap());
        summary
            .details
            .insert(format!("median_gap_q2_{li}"), *med_q2.last().unwrap());
    }
    summary.completed = summary.requested - summary.failures;
    let log_d: Vec<f64> = config.deltas.iter().map(|d| d.ln()).collect();
    for (q, med) in [(1, &med_q1), (2, &med_q2)] {
        let logs: Vec<f64> = med.iter().map(|m| m.ln()).collect();
        let fit = linear_fit(&log_d, &logs)?;
        summary.details.insert(format!("slope_q{q}"), fit.slope);
        summary
            .details
            .insert(format!("r_squared_q{q}"), fit.r_squared);
        summary.checks.push(CheckResult::bounded(
            &format!("gap_shrinks_q{q}"),
            *med.last().unwrap(),
            0.0,
            *med.first().unwrap(),
        ));
        summary.checks.push(CheckResult::bounded(
            &format!("slope_in_band_q{q}"),
            fit.slope,
            config.slope_band.0,
            config.slope_band.1,
        ));
    }
    summary.target = 0.5;
    summary.details.insert("target_slope".into(), 0.5);
    summary.details.insert("refine".into(), config.refine as f64);
    summary.details.insert("horizon".into(), config.horizon);
    let gaps: Vec<f64> = summary.per_rep.iter().map(|r| r.estimate).collect();
    let stats = crate::stats::summarize(&gaps)?;
    summary.sample_mean = stats.mean;
    summary.sample_variance = stats.variance;
    summary.finish();
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed-form left-Riemann sum of the zero-volatility flow
    /// x(t) = m + (x0 - m) e^{-beta t} at step h over n steps.
    fn flow_riemann(m: f64, x0: f64, beta: f64, h: f64, n: usize) -> f64 {
        let r = (-beta * h).exp();
        let geom = (1.0 - r.powi(n as i32)) / (1.0 - r);
        h * (m * n as f64 + (x0 - m) * geom)
    }

    #[test]
    fn zero_volatility_gap_matches_the_flow_quadrature_oracle() {
        let model = CirParams::new(2.0, 0.5, 0.0).unwrap();
        let config = DiscretizationConfig {
            model,
            horizon: 2.0,
            deltas: vec![0.1, 0.05, 0.025, 0.0125],
            refine: 8,
            replications: 1,
            x0: Some(1.0),
            ..Default::default()
        };
        let summary = run_discretization_check(&config).unwrap();
        for (li, &delta) in config.deltas.iter().enumerate() {
            let n = (config.horizon / delta).round() as usize;
            let coarse = flow_riemann(4.0, 1.0, 0.5, delta, n);
            let fine = flow_riemann(4.0, 1.0, 0.5, delta / 8.0, n * 8);
            let want = (coarse - fine).abs();
            let got = summary.details[&format!("median_gap_q1_{li}")];
            assert!(
                (got - want).abs() <= 1e-10 * want.max(1.0),
                "level {li}: {got} vs {want}"
            );
        }
        // A smooth integrand makes the gap scale like the step itself.
        let slope = summary.details["slope_q1"];
        assert!(
            (slope - 1.0).abs() < 0.05,
            "deterministic-path slope {slope}"
        );
    }

    #[test]
    fn ladder_validation_rejects_bad_configs() {
        let too_short = DiscretizationConfig {
            deltas: vec![0.1, 0.05, 0.025],
            ..Default::default()
        };
        assert!(run_discretization_check(&too_short).is_err());
        let no_refine = DiscretizationConfig {
            refine: 1,
            ..Default::default()
        };
        assert!(run_discretization_check(&no_refine).is_err());
    }

    #[test]
    fn stochastic_gaps_shrink_and_rerun_identically() {
        let config = DiscretizationConfig {
            horizon: 2.0,
            deltas: vec![2e-2, 5e-3, 1.25e-3, 3.125e-4],
            refine: 16,
            replications: 6,
            seed: 9,
            ..Default::default()
        };
        let a = run_discretization_check(&config).unwrap();
        let b = run_discretization_check(&config).unwrap();
        assert_eq!(a, b);
        let shrink_q1 = a.checks.iter().find(|c| c.name == "gap_shrinks_q1").unwrap();
        let shrink_q2 = a.checks.iter().find(|c| c.name == "gap_shrinks_q2").unwrap();
        assert!(shrink_q1.pass, "q1 medians should shrink");
        assert!(shrink_q2.pass, "q2 medians should shrink");
    }
}
