//! Shared fixtures for the benchmark targets.
//!
//! The interesting code lives in `benches/`; this library only centralises
//! the model parameters and grids the benchmarks exercise so every target
//! measures the same workload.

use ckls_core::model::{CirParams, CklsParams};
use ckls_core::simulate::{simulate_ckls, SimulationConfig};
use ckls_core::{Path, SamplingGrid};

/// Model used by every benchmark: mean-reverting, elasticity 3/4.
pub fn bench_model() -> CklsParams {
    CklsParams::new(1.0, 1.0, 1.0, 0.75, 1.0).expect("valid parameters")
}

/// Square-root diffusion the benchmark model maps onto.
pub fn bench_cir() -> CirParams {
    bench_model().to_cir().expect("admissible model maps cleanly")
}

/// Uniform grid with `n` steps of width 1e-3.
pub fn bench_grid(n: usize) -> SamplingGrid {
    SamplingGrid::from_delta_n(1e-3, n).expect("valid grid")
}

/// A pre-simulated path for the estimator benchmarks, so they measure
/// estimation alone rather than simulation plus estimation.
pub fn bench_path(n: usize) -> Path {
    let config = SimulationConfig {
        seed: 42,
        ..SimulationConfig::default()
    };
    simulate_ckls(&bench_model(), &bench_grid(n), &config).expect("simulation succeeds")
}
