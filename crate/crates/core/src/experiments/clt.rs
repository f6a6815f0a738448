//! Central-limit checks for the drift statistic and the elasticity pipeline.
//!
//! Each replication produces the normalized error z = sqrt(nΔ)·(estimate −
//! truth); the sample variance of z is compared against the asymptotic
//! variance, the sample mean of the raw estimates against the truth, and the
//! distribution of z standardized by the theoretical variance against the
//! standard normal via a KS test.

use super::{
    check_budget, check_replications, draw_ckls_path, run_replications, CheckResult, DataSource,
    McSummary, RepRecord,
};
use crate::error::Result;
use crate::estimate::{
    asymptotic_variance_beta, asymptotic_variance_k, estimate_elasticity, pr_estimate,
    EstimateOptions,
};
use crate::model::{CirParams, CklsParams, SamplingGrid};
use crate::simulate::{simulate_cir_exact, SimulationConfig};
use crate::stats::{ks_statistic_normal, summarize};
use serde::{Deserialize, Serialize};

/// Config for the drift-statistic CLT check on square-root data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CltBetaConfig {
    pub model: CirParams,
    pub horizon: f64,
    pub omega: f64,
    pub replications: usize,
    pub seed: u64,
    pub x0: Option<f64>,
    /// Relative tolerance on the variance of z.
    pub variance_tol: f64,
    /// KS rejection level for the standardized sample.
    pub ks_level: f64,
    /// Mean-recovery band in standard errors.
    pub mean_se_factor: f64,
    pub failure_budget: f64,
}

impl Default for CltBetaConfig {
    fn default() -> Self {
        Self {
            // The square-root model the level map produces from
            // (b=1, k=3/4, sigma=1, L=1); asymptotic variance 5.
            model: CirParams::new(0.25, 0.5, 1.0).expect("valid default"),
            horizon: 500.0,
            omega: 1.2,
            replications: 500,
            seed: 0,
            x0: None,
            variance_tol: 0.2,
            ks_level: 0.01,
            mean_se_factor: 3.0,
            failure_budget: 0.01,
        }
    }
}

/// Monte Carlo check that sqrt(nΔ)(beta_hat − beta) is centered normal with
/// variance 2β(α+γ²)/α, on exactly simulated square-root paths.
pub fn run_clt_beta(config: &CltBetaConfig) -> Result<McSummary> {
    check_replications(config.replications, 2)?;
    check_budget(config.failure_budget)?;
    let grid = SamplingGrid::from_horizon_omega(config.horizon, config.omega)?;
    let target = asymptotic_variance_beta(&config.model);
    let beta0 = config.model.beta();
    let scale = (grid.n() as f64 * grid.delta()).sqrt();
    let (kept, failures) = run_replications(config.replications, config.failure_budget, |i| {
        let path = simulate_cir_exact(
            &config.model,
            &grid,
            &SimulationConfig {
                seed: config.seed,
                stream: i as u64,
                x0: config.x0,
                ..Default::default()
            },
        )?;
        let est = pr_estimate(&path, config.model.gamma())?;
        Ok(est.beta_hat)
    })?;

    let mut summary = McSummary::new("clt-beta", config.replications, failures);
    summary.per_rep = kept
        .iter()
        .map(|&(i, beta_hat)| RepRecord {
            rep: i,
            seed: config.seed,
            estimate: beta_hat,
            z: scale * (beta_hat - beta0),
        })
        .collect();
    let zs: Vec<f64> = summary.per_rep.iter().map(|r| r.z).collect();
    let z_stats = summarize(&zs)?;
    let est_stats = summarize(&kept.iter().map(|&(_, b)| b).collect::<Vec<_>>())?;
    summary.sample_mean = z_stats.mean;
    summary.sample_variance = z_stats.variance;
    summary.target = target;

    let standardized: Vec<f64> = zs.iter().map(|z| z / target.sqrt()).collect();
    let ks = ks_statistic_normal(&standardized)?;
    summary.checks.push(CheckResult::bounded(
        "variance_relative_to_target",
        z_stats.variance,
        target * (1.0 - config.variance_tol),
        target * (1.0 + config.variance_tol),
    ));
    let mean_band = config.mean_se_factor * (est_stats.variance / est_stats.count as f64).sqrt();
    summary.checks.push(CheckResult::bounded(
        "mean_recovers_beta",
        est_stats.mean,
        beta0 - mean_band,
        beta0 + mean_band,
    ));
    summary.checks.push(CheckResult::bounded(
        "ks_p_value_above_level",
        ks.p_value,
        config.ks_level,
        1.0,
    ));
    summary.ks_standardized = Some(ks);
    summary.details.insert("beta0".into(), beta0);
    summary.details.insert("n".into(), grid.n() as f64);
    summary.details.insert("delta".into(), grid.delta());
    summary
        .details
        .insert("n_delta_sq".into(), grid.n_delta_sq());
    summary
        .details
        .insert("variance_tol".into(), config.variance_tol);
    summary.details.insert("ks_level".into(), config.ks_level);
    summary.finish();
    Ok(summary)
}

/// Config for the elasticity-pipeline CLT check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CltElasticityConfig {
    pub model: CklsParams,
    pub horizon: f64,
    pub omega: f64,
    pub replications: usize,
    pub seed: u64,
    pub substeps: usize,
    pub data_source: DataSource,
    pub estimate: EstimateOptions,
    pub x0: Option<f64>,
    pub variance_tol: f64,
    pub ks_level: f64,
    pub mean_se_factor: f64,
    pub failure_budget: f64,
}

impl Default for CltElasticityConfig {
    fn default() -> Self {
        Self {
            model: CklsParams::new(1.0, 1.0, 1.0, 0.75, 1.0).expect("valid default"),
            horizon: 500.0,
            omega: 1.2,
            replications: 200,
            seed: 0,
            substeps: 16,
            data_source: DataSource::CklsEuler,
            estimate: EstimateOptions::default(),
            x0: None,
            variance_tol: 0.25,
            ks_level: 0.01,
            mean_se_factor: 3.0,
            failure_budget: 0.01,
        }
    }
}

/// Monte Carlo check that sqrt(nΔ)(k_hat − k₀) is centered normal with
/// variance 5(1−k₀)/b, running the full plug-in pipeline per replication.
pub fn run_clt_elasticity(config: &CltElasticityConfig) -> Result<McSummary> {
    check_replications(config.replications, 2)?;
    check_budget(config.failure_budget)?;
    let grid = SamplingGrid::from_horizon_omega(config.horizon, config.omega)?;
    let k0 = config.model.k();
    let b = config.model.b();
    let target = asymptotic_variance_k(b, k0)?;
    let scale = (grid.n() as f64 * grid.delta()).sqrt();
    let (kept, failures) = run_replications(config.replications, config.failure_budget, |i| {
        let path = draw_ckls_path(
            &config.model,
            &grid,
            config.data_source,
            config.substeps,
            config.seed,
            i as u64,
            config.x0,
        )?;
        let report = estimate_elasticity(&path, b, config.model.sigma(), &config.estimate)?;
        Ok(report.k_hat)
    })?;

    let mut summary = McSummary::new("clt-k", config.replications, failures);
    summary.per_rep = kept
        .iter()
        .map(|&(i, k_hat)| RepRecord {
            rep: i,
            seed: config.seed,
            estimate: k_hat,
            z: scale * (k_hat - k0),
        })
        .collect();
    let zs: Vec<f64> = summary.per_rep.iter().map(|r| r.z).collect();
    let z_stats = summarize(&zs)?;
    let est_stats = summarize(&kept.iter().map(|&(_, k)| k).collect::<Vec<_>>())?;
    summary.sample_mean = z_stats.mean;
    summary.sample_variance = z_stats.variance;
    summary.target = target;

    let standardized: Vec<f64> = zs.iter().map(|z| z / target.sqrt()).collect();
    let ks = ks_statistic_normal(&standardized)?;
    summary.checks.push(CheckResult::bounded(
        "variance_relative_to_target",
        z_stats.variance,
        target * (1.0 - config.variance_tol),
        target * (1.0 + config.variance_tol),
    ));
    let mean_band = config.mean_se_factor * (est_stats.variance / est_stats.count as f64).sqrt();
    summary.checks.push(CheckResult::bounded(
        "mean_recovers_k0",
        est_stats.mean,
        k0 - mean_band,
        k0 + mean_band,
    ));
    summary.checks.push(CheckResult::bounded(
        "ks_p_value_above_level",
        ks.p_value,
        config.ks_level,
        1.0,
    ));
    summary.ks_standardized = Some(ks);
    summary.details.insert("k0".into(), k0);
    summary.details.insert("n".into(), grid.n() as f64);
    summary.details.insert("delta".into(), grid.delta());
    summary
        .details
        .insert("n_delta_sq".into(), grid.n_delta_sq());
    summary
        .details
        .insert("variance_tol".into(), config.variance_tol);
    summary.details.insert("ks_level".into(), config.ks_level);
    summary.finish();
    Ok(summary)
}
