//! Moment-ratio drift estimation for square-root data.
//!
//! With S1 and S2 the first two power sums of the n left endpoints, the
//! estimates are
//!
//! ```text
//! alpha_hat = (gamma^2/2) S1^2 / (n S2 - S1^2),
//! beta_hat  = (gamma^2/2) n S1 / (n S2 - S1^2),
//! ```
//!
//! i.e. ratios of the empirical mean to the empirical variance, scaled by
//! half the squared volatility. The denominator statistic vanishes only on
//! constant samples, which are rejected.

use crate::error::{Error, Result};
use crate::model::{CirParams, Path};
use crate::numeric::CompensatedSum;
use serde::{Deserialize, Serialize};

/// Drift estimates together with the sample statistics behind them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftEstimate {
    pub alpha_hat: f64,
    pub beta_hat: f64,
    /// Mean of the left endpoints, S1/n.
    pub empirical_mean: f64,
    /// Denominator statistic (n S2 - S1^2)/n^2, the biased sample variance.
    pub empirical_variance: f64,
}

/// Estimates the square-root model's drift pair from the left endpoints of a
/// discretely observed path, given the volatility coefficient.
pub fn pr_estimate(path: &Path, gamma: f64) -> Result<DriftEstimate> {
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::NonPositiveParameter {
            name: "gamma",
            value: gamma,
        });
    }
    let n = path.n();
    if n < 2 {
        return Err(Error::TooFewPoints { n, min: 2 });
    }
    let mut s1 = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    for &x in path.left_endpoints() {
        s1.add(x);
        s2.add(x * x);
    }
    let (s1, s2) = (s1.total(), s2.total());
    let nf = n as f64;
    let denom = nf * s2 - s1 * s1;
    if denom <= 0.0 {
        return Err(Error::DegenerateSample);
    }
    let half_gamma_sq = 0.5 * gamma * gamma;
    Ok(DriftEstimate {
        alpha_hat: half_gamma_sq * s1 * s1 / denom,
        beta_hat: half_gamma_sq * nf * s1 / denom,
        empirical_mean: s1 / nf,
        empirical_variance: denom / (nf * nf),
    })
}

/// Asymptotic variance of the drift statistic's mean-reversion component:
/// 2 beta (alpha + gamma^2) / alpha.
pub fn asymptotic_variance_beta(cir: &CirParams) -> f64 {
    2.0 * cir.beta() * (cir.alpha() + cir.gamma() * cir.gamma()) / cir.alpha()
}

/// Asymptotic variance of the plug-in elasticity estimate: 5(1-k)/b.
pub fn asymptotic_variance_k(b: f64, k: f64) -> Result<f64> {
    if !b.is_finite() || b <= 0.0 {
        return Err(Error::NonPositiveParameter { name: "b", value: b });
    }
    if !(0.5..1.0).contains(&k) {
        return Err(Error::ElasticityOutOfRange { k });
    }
    Ok(5.0 * (1.0 - k) / b)
}
