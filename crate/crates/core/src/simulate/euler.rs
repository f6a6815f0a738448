//! Euler–Maruyama path generation.
//!
//! One observation interval of width Δ is covered by m internal steps of
//! width δ = Δ/m:
//!
//! ```text
//! state ← state + drift(state)·δ + vol(fix(state))·√δ·Z,
//! ```
//!
//! where `fix` is max(·, 0) under full truncation or |·| under reflection, so
//! fractional powers never see a negative argument. The drift always uses the
//! raw state. Recorded observations are clamped to ≥ 0.

use super::{simulate_cir_exact, RngStream, Scheme, SimulationConfig};
use crate::error::{Error, Result};
use crate::model::{CirParams, CklsParams, Path, SamplingGrid};
use crate::numeric::pos_pow;
use rand_distr::{Distribution, StandardNormal};

fn euler_path(
    grid: &SamplingGrid,
    config: &SimulationConfig,
    x0: f64,
    drift: impl Fn(f64) -> f64,
    vol: impl Fn(f64) -> f64,
) -> Result<Path> {
    let m = config.substeps;
    let dt = grid.delta() / m as f64;
    let sq_dt = dt.sqrt();
    let mut rng = RngStream::new(config.seed, config.stream).rng();
    let mut state = x0;
    let mut values = Vec::with_capacity(grid.n() + 1);
    values.push(x0);
    for i in 1..=grid.n() {
        for _ in 0..m {
            let z: f64 = StandardNormal.sample(&mut rng);
            let fixed = match config.scheme {
                Scheme::FullTruncation => state.max(0.0),
                Scheme::Reflection => state.abs(),
                // Callers route the exact scheme before reaching this loop.
                Scheme::ExactCir => unreachable!("exact scheme handled by caller"),
            };
            state += drift(state) * dt + vol(fixed) * sq_dt * z;
            if !state.is_finite() {
                return Err(Error::NonFiniteSample { step: i });
            }
        }
        values.push(state.max(0.0));
    }
    Path::new(grid.clone(), values)
}

/// Simulates the power model on the given grid.
///
/// The exact-transition scheme is only admissible at elasticity 1/2, where
/// the model coincides with the square-root diffusion (α = a, β = b, γ = σ).
pub fn simulate_ckls(
    params: &CklsParams,
    grid: &SamplingGrid,
    config: &SimulationConfig,
) -> Result<Path> {
    config.validate()?;
    if config.scheme == Scheme::ExactCir {
        if params.k() != 0.5 {
            return Err(Error::ConfigError {
                reason: format!(
                    "exact transition sampling requires elasticity 1/2, got k={}",
                    params.k()
                ),
            });
        }
        let cir = CirParams::new(params.a(), params.b(), params.sigma())?;
        return simulate_cir_exact(&cir, grid, config);
    }
    let x0 = config.x0.unwrap_or_else(|| params.mean_level());
    let (a, b, sigma, k) = (params.a(), params.b(), params.sigma(), params.k());
    euler_path(
        grid,
        config,
        x0,
        |x| a - b * x,
        |x| sigma * pos_pow(x, k),
    )
}

/// Euler baseline for the square-root model, used to cross-validate the
/// exact sampler. The exact-transition scheme is rejected here; use
/// `simulate_cir_exact` for that.
pub fn simulate_cir_euler(
    cir: &CirParams,
    grid: &SamplingGrid,
    config: &SimulationConfig,
) -> Result<Path> {
    config.validate()?;
    if config.scheme == Scheme::ExactCir {
        return Err(Error::ConfigError {
            reason: "exact transition sampling is a separate generator, not an Euler scheme".into(),
        });
    }
    let x0 = config.x0.unwrap_or_else(|| cir.mean_level());
    let (alpha, beta, gamma) = (cir.alpha(), cir.beta(), cir.gamma());
    euler_path(
        grid,
        config,
        x0,
        |x| alpha - beta * x,
        |x| gamma * x.sqrt(),
    )
}
