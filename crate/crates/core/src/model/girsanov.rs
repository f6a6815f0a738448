//! Change-of-measure machinery: the drift-removal kernel
//!
//! ```text
//! q(x) = (a / sigma) x^(-k) - (k sigma / 2) x^(k-1)
//! ```
//!
//! and the discretized log likelihood ratio
//! log W = -sum_i q(x_{i-1}) dW_i - 1/2 sum_i q(x_{i-1})^2 delta,
//! where dW_i is recovered from the observations by inverting the Euler step.
//! exp(log W) reweights averages under the original dynamics into averages
//! under the transformed square-root dynamics.

use crate::error::{Error, Result};
use crate::model::{CklsParams, Path};
use crate::numeric::{pos_pow, CompensatedSum};

/// Kernel value at a single level. Levels at or below 1e-300 are rejected:
/// the reciprocal power overflows silently there.
pub fn girsanov_kernel(lambda: f64, params: &CklsParams) -> Result<f64> {
    if params.sigma() <= 0.0 {
        return Err(Error::NonPositiveParameter {
            name: "sigma",
            value: params.sigma(),
        });
    }
    if !(lambda > 1e-300) || !lambda.is_finite() {
        return Err(Error::DomainError {
            op: "girsanov_kernel",
            value: lambda,
        });
    }
    Ok(kernel_unchecked(lambda, params))
}

#[inline]
fn kernel_unchecked(lambda: f64, p: &CklsParams) -> f64 {
    let k = p.k();
    let sigma = p.sigma();
    (p.a() / sigma) / pos_pow(lambda, k) - (k * sigma / 2.0) * pos_pow(lambda, k - 1.0)
}

/// The unique kernel zero (2a / (k sigma^2))^(1/(2k-1)) for k > 1/2.
///
/// At k = 1/2 the two powers coincide: the kernel is either identically zero
/// (4a = sigma^2) or nowhere zero, so there is no isolated root to return.
pub fn kernel_zero(params: &CklsParams) -> Option<f64> {
    if params.k() <= 0.5 || params.sigma() <= 0.0 {
        return None;
    }
    let base = 2.0 * params.a() / (params.k() * params.sigma() * params.sigma());
    Some(base.powf(1.0 / (2.0 * params.k() - 1.0)))
}

/// Discretized log weight along a path. Requires a strictly positive path and
/// sigma > 0; uses left-endpoint kernel evaluation and compensated sums.
pub fn girsanov_log_weight(path: &Path, params: &CklsParams) -> Result<f64> {
    if params.sigma() <= 0.0 {
        return Err(Error::NonPositiveParameter {
            name: "sigma",
            value: params.sigma(),
        });
    }
    let v = path.values();
    let delta = path.delta();
    let a = params.a();
    let b = params.b();
    let sigma = params.sigma();
    let k = params.k();
    let mut ito = CompensatedSum::new();
    let mut quad = CompensatedSum::new();
    for i in 1..v.len() {
        let left = v[i - 1];
        if left <= 0.0 {
            return Err(Error::NonPositivePath { index: i - 1 });
        }
        let diff = sigma * pos_pow(left, k);
        let dw = (v[i] - left - (a - b * left) * delta) / diff;
        let q = kernel_unchecked(left, params);
        ito.add(q * dw);
        quad.add(q * q);
    }
    // The final observation may be zero; only left endpoints feed the kernel.
    Ok(-ito.total() - 0.5 * delta * quad.total())
}
