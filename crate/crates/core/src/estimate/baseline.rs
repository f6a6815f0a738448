//! Classical drift baselines for the square-root model.
//!
//! Both require strictly positive data. The discrete MLE plugs left-sum
//! approximations into the continuous-record likelihood equations
//!
//! ```text
//! C = alpha·B − beta·T,        X_n − X_0 = alpha·T − beta·A,
//! A = Δ Σ X_j,  B = Δ Σ 1/X_j,  C = Σ (X_{j+1} − X_j)/X_j,  T = nΔ,
//! ```
//!
//! while the pseudo-MLE fits the AR(1) structure of the exact transition by
//! weighted least squares and converts the autoregression coefficient phi
//! into beta_hat = −ln(phi)/Δ.

use crate::error::{Error, Result};
use crate::model::Path;
use crate::numeric::CompensatedSum;

fn require_positive(path: &Path) -> Result<()> {
    if let Some(index) = path.values().iter().position(|&v| v <= 0.0) {
        return Err(Error::NonPositivePath { index });
    }
    Ok(())
}

/// Discretized continuous-record MLE of (alpha, beta). The volatility
/// coefficient scales the likelihood without moving its drift maximizer, so
/// it is validated but does not enter the estimates.
pub fn baseline_mle_discrete(path: &Path, gamma: f64) -> Result<(f64, f64)> {
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
    require_positive(path)?;
    let v = path.values();
    let delta = path.delta();
    let mut sum_x = CompensatedSum::new();
    let mut sum_inv = CompensatedSum::new();
    let mut sum_rel = CompensatedSum::new();
    for j in 0..n {
        sum_x.add(v[j]);
        sum_inv.add(1.0 / v[j]);
        sum_rel.add((v[j + 1] - v[j]) / v[j]);
    }
    let a = delta * sum_x.total();
    let b = delta * sum_inv.total();
    let c = sum_rel.total();
    let t = delta * n as f64;
    let denom = a * b - t * t;
    if denom <= 0.0 {
        return Err(Error::DegenerateSample);
    }
    let swing = v[n] - v[0];
    let alpha_hat = (a * c - t * swing) / denom;
    let beta_hat = (t * c - b * swing) / denom;
    Ok((alpha_hat, beta_hat))
}

/// AR(1) pseudo-MLE of (alpha, beta): fits X_{j+1} ≈ phi·X_j + chi(1−phi)
/// by 1/X_j-weighted least squares, then beta_hat = −ln(phi)/delta and
/// alpha_hat = beta_hat·chi. Requires the fitted phi to land in (0,1).
pub fn baseline_pseudo_mle(path: &Path, delta: f64) -> Result<(f64, f64)> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::NonPositiveParameter {
            name: "delta",
            value: delta,
        });
    }
    let n = path.n();
    if n < 2 {
        return Err(Error::TooFewPoints { n, min: 2 });
    }
    require_positive(path)?;
    let v = path.values();
    let mut sum_next = CompensatedSum::new();
    let mut sum_left = CompensatedSum::new();
    let mut sum_inv = CompensatedSum::new();
    let mut sum_ratio = CompensatedSum::new();
    for j in 0..n {
        sum_next.add(v[j + 1]);
        sum_left.add(v[j]);
        sum_inv.add(1.0 / v[j]);
        sum_ratio.add(v[j + 1] / v[j]);
    }
    let s = sum_next.total();
    let r = sum_left.total();
    let q = sum_inv.total();
    let p = sum_ratio.total();
    let nf = n as f64;
    let denom = q * r - nf * nf;
    if denom <= 0.0 {
        return Err(Error::DegenerateSample);
    }
    let phi = (q * s - p * nf) / denom;
    if !(phi > 0.0 && phi < 1.0) {
        return Err(Error::PhiOutOfRange { phi });
    }
    let beta_hat = -phi.ln() / delta;
    let chi = (s - phi * r) / (nf * (1.0 - phi));
    Ok((beta_hat * chi, beta_hat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SamplingGrid;

    fn path(values: Vec<f64>, delta: f64) -> Path {
        let grid = SamplingGrid::from_delta_n(delta, values.len() - 1).unwrap();
        Path::new(grid, values).unwrap()
    }

    fn reference_path() -> Path {
        path(vec![2.0, 1.85, 1.72, 1.64, 1.55, 1.50], 0.1)
    }

    #[test]
    fn discrete_mle_reference_values() {
        // Frozen against an arbitrary-precision evaluation of the left-sum
        // likelihood equations on this path.
        let (alpha, beta) = baseline_mle_discrete(&reference_path(), 1.0).unwrap();
        assert!((alpha - 2.81652304537268395).abs() < 1e-13, "{alpha}");
        assert!((beta - 2.17838073366020773).abs() < 1e-13, "{beta}");
    }

    #[test]
    fn pseudo_mle_reference_values() {
        // Same path; phi = 0.782161926633979227 from the weighted AR(1) fit.
        let (alpha, beta) = baseline_pseudo_mle(&reference_path(), 0.1).unwrap();
        assert!((beta - 2.45693492565422948).abs() < 1e-12, "{beta}");
        assert!((alpha - 3.1766778562436413).abs() < 1e-12, "{alpha}");
    }

    #[test]
    fn zero_values_are_rejected() {
        let p = path(vec![1.0, 0.0, 1.5], 0.1);
        assert!(matches!(
            baseline_mle_discrete(&p, 1.0),
            Err(Error::NonPositivePath { index: 1 })
        ));
        assert!(matches!(
            baseline_pseudo_mle(&p, 0.1),
            Err(Error::NonPositivePath { index: 1 })
        ));
    }

    #[test]
    fn unit_increment_path_puts_phi_on_boundary() {
        // X_{j+1} = X_j + 1 makes the fitted phi exactly 1.
        let p = path(vec![1.0, 2.0, 3.0, 4.0, 5.0], 0.1);
        match baseline_pseudo_mle(&p, 0.1) {
            Err(Error::PhiOutOfRange { phi }) => assert!((phi - 1.0).abs() < 1e-12),
            other => panic!("expected PhiOutOfRange, got {other:?}"),
        }
    }

    #[test]
    fn constant_paths_are_degenerate() {
        let p = path(vec![2.0; 6], 0.1);
        assert!(matches!(
            baseline_mle_discrete(&p, 1.0),
            Err(Error::DegenerateSample)
        ));
        assert!(matches!(
            baseline_pseudo_mle(&p, 0.1),
            Err(Error::DegenerateSample)
        ));
    }

    #[test]
    fn too_short_paths_are_rejected() {
        let p = path(vec![1.0, 2.0], 0.1);
        assert!(baseline_mle_discrete(&p, 1.0).is_err());
        assert!(baseline_pseudo_mle(&p, 0.1).is_err());
    }
}
