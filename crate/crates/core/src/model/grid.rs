//! Equidistant sampling grids and observed paths.
//!
//! The estimation theory is phrased in a horizon/mesh family indexed by a rate
//! exponent omega: delta = T^(-omega), n = floor(T^(omega+1)), so that
//! n delta = T grows while n delta^2 = T^(1-omega) shrinks for omega > 1 (the
//! ultra-high-frequency regime).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An equidistant observation grid: n steps of width delta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingGrid {
    delta: f64,
    n: usize,
    /// Covered span n * delta. When the grid is built from (horizon, omega)
    /// this can differ from the requested horizon in the last few digits,
    /// because n is integral.
    horizon: f64,
    /// Rate exponent when the grid came from the (horizon, omega) family.
    omega: Option<f64>,
}

impl SamplingGrid {
    /// Grid with explicit mesh and step count.
    pub fn from_delta_n(delta: f64, n: usize) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::NonPositiveParameter {
                name: "delta",
                value: delta,
            });
        }
        if n == 0 {
            return Err(Error::DegenerateGrid {
                horizon: 0.0,
                omega: f64::NAN,
            });
        }
        Ok(Self {
            delta,
            n,
            horizon: delta * n as f64,
            omega: None,
        })
    }

    /// Grid from the rate family: delta = horizon^(-omega),
    /// n = floor(horizon^(omega+1)).
    ///
    /// The floor is guarded against representation error: a power that lands
    /// within 1e-9 (relative) of an integer is treated as that integer, so
    /// e.g. 100^2.5 yields exactly 100000 steps.
    pub fn from_horizon_omega(horizon: f64, omega: f64) -> Result<Self> {
        if !(horizon > 1.0) || !horizon.is_finite() {
            return Err(Error::DomainError {
                op: "build_grid horizon",
                value: horizon,
            });
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::DomainError {
                op: "build_grid omega",
                value: omega,
            });
        }
        let raw = horizon.powf(omega + 1.0);
        let snapped = if (raw - raw.round()).abs() <= 1e-9 * raw.max(1.0) {
            raw.round()
        } else {
            raw.floor()
        };
        if !(snapped >= 1.0) || snapped > 9.0e15 {
            return Err(Error::DegenerateGrid { horizon, omega });
        }
        let n = snapped as usize;
        let delta = horizon.powf(-omega);
        Ok(Self {
            delta,
            n,
            horizon: delta * n as f64,
            omega: Some(omega),
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Number of steps; a path on this grid holds n + 1 values.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Covered time span n * delta.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn omega(&self) -> Option<f64> {
        self.omega
    }

    /// Diagnostic n * delta^2; vanishing of this quantity is what the
    /// plug-in error analysis needs.
    pub fn n_delta_sq(&self) -> f64 {
        self.n as f64 * self.delta * self.delta
    }

    /// True when the grid came from the rate family with omega > 1.
    pub fn is_ultra_high_frequency(&self) -> bool {
        matches!(self.omega, Some(w) if w > 1.0)
    }

    /// Observation time of index i (0 <= i <= n).
    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.delta
    }
}

/// An observed trajectory: n + 1 nonnegative finite values on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    grid: SamplingGrid,
    values: Vec<f64>,
    strictly_positive: bool,
}

impl Path {
    /// Validates length (n + 1), finiteness, and nonnegativity.
    pub fn new(grid: SamplingGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() + 1 {
            return Err(Error::ConfigError {
                reason: format!(
                    "path needs {} values for {} steps, got {}",
                    grid.n() + 1,
                    grid.n(),
                    values.len()
                ),
            });
        }
        let mut strictly_positive = true;
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteSample { step: i });
            }
            if v < 0.0 {
                return Err(Error::DomainError {
                    op: "path value",
                    value: v,
                });
            }
            if v == 0.0 {
                strictly_positive = false;
            }
        }
        Ok(Self {
            grid,
            values,
            strictly_positive,
        })
    }

    pub fn grid(&self) -> &SamplingGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of increments.
    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn delta(&self) -> f64 {
        self.grid.delta()
    }

    /// The n left endpoints, i.e. all values except the final observation.
    pub fn left_endpoints(&self) -> &[f64] {
        &self.values[..self.values.len() - 1]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn strictly_positive(&self) -> bool {
        self.strictly_positive
    }

    /// Keep every stride-th observation; stride must divide n.
    pub fn subsample(&self, stride: usize) -> Result<Path> {
        let n = self.n();
        if stride == 0 || n % stride != 0 {
            return Err(Error::StrideMismatch { n, stride });
        }
        if stride == 1 {
            return Ok(self.clone());
        }
        let values: Vec<f64> = self.values.iter().step_by(stride).copied().collect();
        let grid = SamplingGrid::from_delta_n(self.grid.delta() * stride as f64, n / stride)?;
        Path::new(grid, values)
    }
}
