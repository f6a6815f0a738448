//! Simulation and estimation toolkit for scalar mean-reverting diffusions with
//! power-law volatility, organized around one change of variables: a process
//!
//! ```text
//! d lambda_t = (a - b lambda_t) dt + sigma lambda_t^k dW_t,      1/2 <= k < 1,
//! ```
//!
//! is carried by `x -> L^2 x^(2-2k) / (4(1-k)^2)` onto a square-root diffusion
//!
//! ```text
//! d X_t = (alpha - beta X_t) dt + gamma sqrt(X_t) dW_t,
//! ```
//!
//! whose linear drift is estimable in closed form from high-frequency samples.
//! The crate provides the model types and the transform ([`model`]), exact and
//! Euler path samplers ([`simulate`]), drift and elasticity estimators together
//! with their asymptotic variances ([`estimate`]), and a reproducible Monte
//! Carlo harness that checks the advertised limit behavior ([`experiments`]).

pub mod error;
pub mod estimate;
pub mod experiments;
pub mod model;
pub mod numeric;
pub mod simulate;
pub mod stats;

pub use error::{Error, Result};
pub use model::{CirParams, CklsParams, Path, SamplingGrid};
