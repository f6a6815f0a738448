//! Empirical confidence-interval coverage for the elasticity pipeline.
//!
//! Each replication runs the full pipeline and records whether the nominal
//! interval contains the true elasticity; the empirical frequency must land
//! in the configured band around the nominal level.

use super::{
    check_budget, check_replications, run_replications, CheckResult, DataSource, McSummary,
    RepRecord,
};
use crate::error::Result;
use crate::estimate::{estimate_elasticity, EstimateOptions};
use crate::model::CklsParams;
use crate::simulate::build_grid;
use crate::stats::summarize;
use serde::{Deserialize, Serialize};

/// Config for the coverage study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CoverageConfig {
    pub model: CklsParams,
    pub horizon: f64,
    pub omega: f64,
    pub replications: usize,
    pub seed: u64,
    pub substeps: usize,
    pub data_source: DataSource,
    pub estimate: EstimateOptions,
    pub x0: Option<f64>,
    /// Acceptable empirical coverage interval.
    pub coverage_band: (f64, f64),
    pub failure_budget: f64,
}

impl Default for CoverageConfig {
    fn default() -> Self {
        Self {
            model: CklsParams::new(1.0, 1.0, 1.0, 0.75, 1.0).expect("valid default"),
            horizon: 500.0,
            omega: 1.2,
            replications: 500,
            seed: 0,
            substeps: 16,
            data_source: DataSource::CklsEuler,
            estimate: EstimateOptions::default(),
            x0: None,
            coverage_band: (0.90, 0.99),
            failure_budget: 0.01,
        }
    }
}

/// Runs the coverage study.
pub fn run_ci_coverage(config: &CoverageConfig) -> Result<McSummary> {
    check_replications(config.replications, 10)?;
    check_budget(config.failure_budget)?;
    let grid = build_grid(config.horizon, config.omega)?;
    let k0 = config.model.k();
    let b = config.model.b();
    let sigma = config.model.sigma();
    let (kept, failures) = run_replications(config.replications, config.failure_budget, |i| {
        let path = super::draw_ckls_path(
            &config.model,
            &grid,
            config.data_source,
            config.substeps,
            config.seed,
            i as u64,
            config.x0,
        )?;
        let report = estimate_elasticity(&path, b, sigma, &config.estimate)?;
        Ok((report.k_hat, report.stderr, report.ci_low, report.ci_high))
    })?;
    let mut summary = McSummary::new("coverage", config.replications, failures);
    let mut covered = 0usize;
    let mut k_hats = Vec::with_capacity(kept.len());
    for &(i, (k_hat, stderr, lo, hi)) in &kept {
        if lo <= k0 && k0 <= hi {
            covered += 1;
        }
        k_hats.push(k_hat);
        summary.per_rep.push(RepRecord {
            rep: i,
            seed: config.seed,
            estimate: k_hat,
            z: (k_hat - k0) / stderr,
        });
    }
    let coverage = covered as f64 / kept.len() as f64;
    summary.checks.push(CheckResult::bounded(
        "coverage_within_band",
        coverage,
        config.coverage_band.0,
        config.coverage_band.1,
    ));
    let stats = summarize(&k_hats)?;
    summary.sample_mean = stats.mean;
    summary.sample_variance = stats.variance;
    summary.target = config.estimate.ci_level;
    summary.details.insert("coverage".into(), coverage);
    summary.details.insert("covered".into(), covered as f64);
    summary.details.insert("k0".into(), k0);
    summary
        .details
        .insert("nominal_level".into(), config.estimate.ci_level);
    summary.details.insert("n".into(), grid.n() as f64);
    summary.details.insert("delta".into(), grid.delta());
    summary.finish();
    Ok(summary)
}
