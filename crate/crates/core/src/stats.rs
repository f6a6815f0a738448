//! Minimal descriptive statistics: sample summaries, a one-sample
//! Kolmogorov-Smirnov statistic against the standard normal, and ordinary
//! least squares for slope diagnostics. Deliberately small; no external
//! statistics dependency.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{kolmogorov_sf, normal_cdf, CompensatedSum};

/// Quantile levels reported by [`summarize`].
pub const QUANTILE_LEVELS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

/// Descriptive summary of a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub count: usize,
    pub mean: f64,
    /// Unbiased (n-1 denominator) variance.
    pub variance: f64,
    pub min: f64,
    pub max: f64,
    /// (level, value) pairs at [`QUANTILE_LEVELS`], linear interpolation.
    pub quantiles: Vec<(f64, f64)>,
}

/// Summarize a sample of at least two points.
pub fn summarize(values: &[f64]) -> Result<SampleSummary> {
    if values.len() < 2 {
        return Err(Error::TooFewSamples {
            n: values.len(),
            min: 2,
        });
    }
    let n = values.len() as f64;
    let mut s = CompensatedSum::new();
    for &v in values {
        s.add(v);
    }
    let mean = s.total() / n;
    let mut sq = CompensatedSum::new();
    for &v in values {
        let d = v - mean;
        sq.add(d * d);
    }
    let variance = sq.total() / (n - 1.0);
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let quantiles = QUANTILE_LEVELS
        .iter()
        .map(|&p| (p, quantile_sorted(&sorted, p)))
        .collect();
    Ok(SampleSummary {
        count: values.len(),
        mean,
        variance,
        min: sorted[0],
        max: sorted[sorted.len() - 1],
        quantiles,
    })
}

/// Linear-interpolation quantile of an already sorted slice.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = p.clamp(0.0, 1.0) * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let w = h - lo as f64;
    sorted[lo] * (1.0 - w) + sorted[hi] * w
}

/// Median convenience wrapper (sorts a copy).
pub fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile_sorted(&sorted, 0.5)
}

/// One-sample KS test result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsTest {
    /// Supremum distance between the empirical CDF and the standard normal.
    pub statistic: f64,
    /// Asymptotic p-value, Kolmogorov tail at sqrt(n) * statistic.
    pub p_value: f64,
}

/// KS distance between the sample and the standard normal law.
///
/// Requires at least 8 points for the asymptotic p-value to mean anything.
/// The statistic itself is exact: max over order statistics of the one-sided
/// discrepancies against `normal_cdf`.
pub fn ks_statistic_normal(values: &[f64]) -> Result<KsTest> {
    if values.len() < 8 {
        return Err(Error::TooFewSamples {
            n: values.len(),
            min: 8,
        });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = normal_cdf(x);
        let upper = (i as f64 + 1.0) / n - f;
        let lower = f - i as f64 / n;
        d = d.max(upper).max(lower);
    }
    Ok(KsTest {
        statistic: d,
        p_value: kolmogorov_sf(n.sqrt() * d),
    })
}

/// Ordinary least squares fit y = intercept + slope * x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination; 1.0 when the residuals vanish.
    pub r_squared: f64,
}

/// Least-squares line through (xs, ys).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::DegenerateDesign);
    }
    let mean_x = compensated_mean(xs);
    let mean_y = compensated_mean(ys);
    let mut sxx = CompensatedSum::new();
    let mut sxy = CompensatedSum::new();
    let mut syy = CompensatedSum::new();
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx.add(dx * dx);
        sxy.add(dx * dy);
        syy.add(dy * dy);
    }
    let sxx = sxx.total();
    if sxx <= 0.0 {
        return Err(Error::DegenerateDesign);
    }
    let slope = sxy.total() / sxx;
    let intercept = mean_y - slope * mean_x;
    let syy = syy.total();
    let r_squared = if syy <= 0.0 {
        1.0
    } else {
        let mut ss_res = CompensatedSum::new();
        for (&x, &y) in xs.iter().zip(ys) {
            let r = y - intercept - slope * x;
            ss_res.add(r * r);
        }
        (1.0 - ss_res.total() / syy).clamp(0.0, 1.0)
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

fn compensated_mean(values: &[f64]) -> f64 {
    let mut s = CompensatedSum::new();
    for &v in values {
        s.add(v);
    }
    s.total() / values.len() as f64
}
