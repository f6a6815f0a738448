//! Drift and elasticity estimation.
//!
//! The centerpiece is a two-stage pipeline for the power model with known
//! (b, sigma): a rough elasticity value is read off realized
//! quadratic-variation increments, the path is mapped to pseudo square-root
//! data, and a moment-ratio drift statistic over the mapped left endpoints is
//! inverted into the final elasticity estimate
//!
//! ```text
//! k_hat = 1 - beta_plugin / (2b),
//! ```
//!
//! with an asymptotic standard error of sqrt(5(1-k_hat)/b / (n Delta)).
//! Two classical drift baselines for the square-root model are included for
//! efficiency comparisons.

mod baseline;
mod drift;
mod initial;
mod pipeline;

pub use baseline::{baseline_mle_discrete, baseline_pseudo_mle};
pub use drift::{asymptotic_variance_beta, asymptotic_variance_k, pr_estimate, DriftEstimate};
pub use initial::{
    initial_k_aggregated, initial_k_ratio, initial_k_single, AggregatedInitialK, InitialVariant,
    QvWindow, DEFAULT_LEVEL_EPSILON,
};
pub use pipeline::{
    estimate_elasticity, plugin_beta, transform_data, ElasticityReport, EstimateOptions,
};
