//! The plug-in elasticity pipeline.
//!
//! Each positive level maps to pseudo square-root data through
//!
//! ```text
//! x  ↦  L² / (4(1-k₀)²) · x^(2-2k₀),
//! ```
//!
//! whose drift statistic equals 2b(1-k₀) when k₀ is the true elasticity.
//! Because L cancels in the drift statistic, the plug-in value can be formed
//! directly from power sums of the raw left endpoints, and the final
//! estimate is k_hat = 1 - beta_plugin/(2b).

use super::drift::pr_estimate;
use super::initial::{initial_k_aggregated, InitialVariant, QvWindow};
use crate::error::{Error, Result};
use crate::model::{elasticity_from_beta, LevelMap, Path};
use crate::numeric::{normal_quantile, pos_pow, CompensatedSum};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Options for `estimate_elasticity`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimateOptions {
    /// Aggregated initial-reading variant.
    pub variant: InitialVariant,
    /// Exclusion width for the initial reading.
    pub epsilon: f64,
    /// Realized-QV pooling for the initial reading.
    pub window: QvWindow,
    /// Two-sided confidence level in (0,1).
    pub ci_level: f64,
    /// Bypasses the initial reading with a fixed elasticity; must lie in
    /// [1/2, 1).
    pub forced_k_initial: Option<f64>,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            variant: InitialVariant::Single,
            epsilon: 0.1,
            window: QvWindow::Auto,
            ci_level: 0.95,
            forced_k_initial: None,
        }
    }
}

/// Result of the plug-in pipeline, serializable as flat JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElasticityReport {
    pub k_hat: f64,
    /// Initial elasticity actually fed into the plug-in step (clamped into
    /// [1/2, 1) if the raw reading strayed; see diagnostics).
    pub k_initial: f64,
    pub beta_plugin: f64,
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: usize,
    pub delta: f64,
    /// Numeric side-channel: admissibility counts, the denominator
    /// statistic, and out-of-range flags (1.0 = raised).
    pub diagnostics: BTreeMap<String, f64>,
}

/// Maps every observation of a strictly positive path through the level map
/// with the given elasticity and scale; the grid is unchanged.
pub fn transform_data(path: &Path, k0_hat: f64, l: f64) -> Result<Path> {
    let map = LevelMap::new(k0_hat, l)?;
    if let Some(index) = path.values().iter().position(|&v| v <= 0.0) {
        return Err(Error::NonPositivePath { index });
    }
    let values = path.values().iter().map(|&v| map.forward(v)).collect();
    Path::new(path.grid().clone(), values)
}

struct PluginStats {
    beta: f64,
    /// Denominator statistic of the pseudo data at unit scale (L = 1).
    d_hat: f64,
}

fn plugin_beta_stats(path: &Path, k0_hat: f64, sigma: f64) -> Result<PluginStats> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::NonPositiveParameter {
            name: "sigma",
            value: sigma,
        });
    }
    if !(0.5..1.0).contains(&k0_hat) {
        return Err(Error::ElasticityOutOfRange { k: k0_hat });
    }
    let n = path.n();
    if n < 2 {
        return Err(Error::TooFewPoints { n, min: 2 });
    }
    if let Some(index) = path.values().iter().position(|&v| v <= 0.0) {
        return Err(Error::NonPositivePath { index });
    }
    let expo = 2.0 - 2.0 * k0_hat;
    let mut s1 = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    for &lam in path.left_endpoints() {
        let p = pos_pow(lam, expo);
        s1.add(p);
        s2.add(p * p);
    }
    let (s1, s2) = (s1.total(), s2.total());
    let nf = n as f64;
    let denom = nf * s2 - s1 * s1;
    if denom <= 0.0 {
        return Err(Error::DegenerateSample);
    }
    let one_minus = 1.0 - k0_hat;
    let beta = 2.0 * sigma * sigma * one_minus * one_minus * nf * s1 / denom;
    // The same statistic must emerge from explicitly transforming the data
    // first; the scale L cancels exactly. Skipped when the denominator has
    // lost most of its precision to cancellation (powers all nearly equal,
    // as happens for k0_hat close to 1), where the two routes legitimately
    // round differently.
    #[cfg(debug_assertions)]
    {
        let conditioning = denom / (nf * s2);
        if conditioning > 1e-6 {
            let via_transform = pr_estimate(&transform_data(path, k0_hat, 1.0)?, sigma)?.beta_hat;
            debug_assert!(
                (beta - via_transform).abs() <= 1e-8 * beta.abs().max(1.0),
                "plug-in shortcut diverged from the explicit route: {beta} vs {via_transform}"
            );
        }
    }
    // Unit-scale pseudo-data variance: coefficient 1/(4(1-k)^2)^2 removed by
    // reporting at the raw power-sum scale.
    let scale = 1.0 / (4.0 * one_minus * one_minus);
    Ok(PluginStats {
        beta,
        d_hat: scale * scale * denom / (nf * nf),
    })
}

/// Drift statistic of the implicitly transformed left endpoints:
/// 2 sigma^2 (1-k₀)² n Σ λ^(2-2k₀) / (n Σ λ^(4-4k₀) − (Σ λ^(2-2k₀))²).
pub fn plugin_beta(path: &Path, k0_hat: f64, sigma: f64) -> Result<f64> {
    Ok(plugin_beta_stats(path, k0_hat, sigma)?.beta)
}

/// Runs the full pipeline: initial elasticity reading, plug-in drift
/// statistic, inversion to k_hat, and a normal confidence interval from the
/// asymptotic variance 5(1-k_hat)/b scaled by the observation span nΔ.
pub fn estimate_elasticity(
    path: &Path,
    b: f64,
    sigma: f64,
    options: &EstimateOptions,
) -> Result<ElasticityReport> {
    if !b.is_finite() || b <= 0.0 {
        return Err(Error::NonPositiveParameter { name: "b", value: b });
    }
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::NonPositiveParameter {
            name: "sigma",
            value: sigma,
        });
    }
    if !(options.ci_level > 0.0 && options.ci_level < 1.0) {
        return Err(Error::ConfigError {
            reason: format!("confidence level must lie in (0,1), got {}", options.ci_level),
        });
    }
    let mut diagnostics = BTreeMap::new();
    let k_initial = match options.forced_k_initial {
        Some(k0) => {
            if !(0.5..1.0).contains(&k0) {
                return Err(Error::ElasticityOutOfRange { k: k0 });
            }
            k0
        }
        None => {
            let agg = initial_k_aggregated(
                path,
                Some(sigma),
                options.epsilon,
                options.variant,
                options.window,
            )?;
            diagnostics.insert("initial_used".into(), agg.used as f64);
            diagnostics.insert("initial_excluded".into(), agg.excluded as f64);
            diagnostics.insert("initial_window".into(), agg.window as f64);
            diagnostics.insert("initial_raw".into(), agg.k_hat);
            let clamped = agg.k_hat.clamp(0.5, 1.0 - 1e-9);
            diagnostics.insert(
                "initial_clamped".into(),
                (clamped != agg.k_hat) as u8 as f64,
            );
            clamped
        }
    };
    let stats = plugin_beta_stats(path, k_initial, sigma)?;
    let k_hat = elasticity_from_beta(stats.beta, b)?;
    // beta_plugin > 0 forces k_hat < 1, so the variance stays positive even
    // when k_hat strays below the model range; that case is only flagged.
    let var_k = 5.0 * (1.0 - k_hat) / b;
    let stderr = (var_k / (path.n() as f64 * path.delta())).sqrt();
    let z = normal_quantile(0.5 + options.ci_level / 2.0)?;
    diagnostics.insert("d_hat".into(), stats.d_hat);
    diagnostics.insert(
        "flag_out_of_model_range".into(),
        !(0.5..1.0).contains(&k_hat) as u8 as f64,
    );
    Ok(ElasticityReport {
        k_hat,
        k_initial,
        beta_plugin: stats.beta,
        stderr,
        ci_low: k_hat - z * stderr,
        ci_high: k_hat + z * stderr,
        n: path.n(),
        delta: path.delta(),
        diagnostics,
    })
}
