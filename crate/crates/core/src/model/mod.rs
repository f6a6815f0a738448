//! Model types and closed-form operations: parameter sets for both diffusions,
//! the sampling grid, the level transform and its inverse, the change-of-measure
//! kernel, and stationary laws.

mod girsanov;
mod grid;
mod params;
mod stationary;
mod transform;

pub use girsanov::{girsanov_kernel, girsanov_log_weight, kernel_zero};
pub use grid::{Path, SamplingGrid};
pub use params::{elasticity_from_beta, CirParams, CklsParams};
pub use stationary::{cir_stationary_moment, StationaryLawCkls};
pub use transform::{transform_level, transform_level_inverse, LevelMap};
