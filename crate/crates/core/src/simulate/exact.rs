//! Exact transition sampling for the square-root model.
//!
//! Conditional on the current level x, the level after a step of width s is a
//! scaled noncentral chi-square:
//!
//! ```text
//! X_{t+s} = c·W,   W ~ chi'^2(d, nu),
//! c  = gamma^2 (1 - e^{-beta s}) / (4 beta),
//! nu = x e^{-beta s} / c,
//! d  = 4 alpha / gamma^2.
//! ```
//!
//! Sampling decomposes by degrees of freedom: for d >= 1,
//! W = chi^2(d-1) + (Z + sqrt(nu))^2 with the central part dropped when d = 1
//! exactly; for d < 1, W = chi^2(d + 2N) with N ~ Poisson(nu/2). Both pieces
//! are exact for every d > 0, so paths drawn here carry no discretization
//! error at any step size.

use super::{RngStream, SimulationConfig};
use crate::error::{Error, Result};
use crate::model::{CirParams, Path, SamplingGrid};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};

/// Precomputed one-step transition for a fixed step width.
pub(crate) struct CirExactStepper {
    d: f64,
    decay: f64,
    scale: f64,
    /// Long-run mean; drives the gamma = 0 deterministic flow.
    mean_level: f64,
    /// chi^2(d-1) as Gamma((d-1)/2, 2); absent when d = 1 exactly.
    central: Option<Gamma<f64>>,
}

impl CirExactStepper {
    pub(crate) fn new(cir: &CirParams, step: f64) -> Result<Self> {
        if !step.is_finite() || step <= 0.0 {
            return Err(Error::NonPositiveParameter {
                name: "step",
                value: step,
            });
        }
        let decay = (-cir.beta() * step).exp();
        if cir.gamma() == 0.0 {
            // Zero volatility: the transition is a point mass at the
            // conditional mean, i.e. the exact mean-reversion flow.
            return Ok(Self {
                d: f64::INFINITY,
                decay,
                scale: 0.0,
                mean_level: cir.mean_level(),
                central: None,
            });
        }
        let d = cir.degrees_of_freedom();
        let scale = cir.gamma() * cir.gamma() * (1.0 - decay) / (4.0 * cir.beta());
        let central = if d > 1.0 {
            Some(Gamma::new((d - 1.0) / 2.0, 2.0).map_err(|_| Error::DomainError {
                op: "chi-square shape",
                value: d,
            })?)
        } else {
            None
        };
        Ok(Self {
            d,
            decay,
            scale,
            mean_level: cir.mean_level(),
            central,
        })
    }

    /// Draws the level one step ahead of `x`.
    pub(crate) fn step(&self, x: f64, rng: &mut ChaCha12Rng) -> Result<f64> {
        if self.scale == 0.0 {
            return Ok(x * self.decay + self.mean_level * (1.0 - self.decay));
        }
        let nu = x * self.decay / self.scale;
        if !nu.is_finite() || nu < 0.0 {
            return Err(Error::NonFiniteSample { step: 0 });
        }
        let w = if self.d >= 1.0 {
            let z: f64 = StandardNormal.sample(rng);
            let shifted = z + nu.sqrt();
            let mut w = shifted * shifted;
            if let Some(central) = &self.central {
                w += central.sample(rng);
            }
            w
        } else {
            // Poisson-mixed central chi-square covers 0 < d < 1 exactly.
            let jumps = if nu > 0.0 {
                Poisson::new(nu / 2.0)
                    .map_err(|_| Error::NonFiniteSample { step: 0 })?
                    .sample(rng)
            } else {
                0.0
            };
            let shape = (self.d + 2.0 * jumps) / 2.0;
            Gamma::new(shape, 2.0)
                .map_err(|_| Error::DomainError {
                    op: "chi-square shape",
                    value: shape,
                })?
                .sample(rng)
        };
        Ok(self.scale * w)
    }
}

/// Samples the square-root model at the grid times from its exact transition.
///
/// `config.substeps` is ignored: the transition is exact at any step width,
/// so refinement buys nothing. The scheme field is likewise ignored.
pub fn simulate_cir_exact(
    cir: &CirParams,
    grid: &SamplingGrid,
    config: &SimulationConfig,
) -> Result<Path> {
    config.validate()?;
    let stepper = CirExactStepper::new(cir, grid.delta())?;
    let mut rng = RngStream::new(config.seed, config.stream).rng();
    let x0 = config.x0.unwrap_or_else(|| cir.mean_level());
    let mut values = Vec::with_capacity(grid.n() + 1);
    values.push(x0);
    let mut state = x0;
    for i in 1..=grid.n() {
        state = stepper
            .step(state, &mut rng)
            .map_err(|_| Error::NonFiniteSample { step: i })?;
        if !state.is_finite() {
            return Err(Error::NonFiniteSample { step: i });
        }
        values.push(state);
    }
    Path::new(grid.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(delta: f64, n: usize) -> SamplingGrid {
        SamplingGrid::from_delta_n(delta, n).unwrap()
    }

    fn config(seed: u64) -> SimulationConfig {
        SimulationConfig {
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn unit_degrees_of_freedom_skips_central_part() {
        // 4 alpha = gamma^2 gives exactly one degree of freedom.
        let cir = CirParams::new(0.25, 1.0, 1.0).unwrap();
        let stepper = CirExactStepper::new(&cir, 0.5).unwrap();
        assert_eq!(stepper.d, 1.0);
        assert!(stepper.central.is_none());
        // With the central part absent, the draw must reproduce
        // scale·(Z + sqrt(nu))^2 for the same generator state.
        let mut rng = RngStream::new(5, 0).rng();
        let mut twin = rng.clone();
        let x = 0.7;
        let drawn = stepper.step(x, &mut rng).unwrap();
        let z: f64 = StandardNormal.sample(&mut twin);
        let nu = x * stepper.decay / stepper.scale;
        let shifted = z + nu.sqrt();
        let manual = stepper.scale * (shifted * shifted);
        assert_eq!(drawn, manual);
    }

    #[test]
    fn conditional_mean_matches_transition_formula() {
        // E[X_s | X_0 = x] = x e^{-beta s} + (alpha/beta)(1 - e^{-beta s}).
        let cases = [
            (CirParams::new(0.25, 0.5, 1.0).unwrap(), 1.0, 0.5), // d = 1
            (CirParams::new(1.5, 1.0, 1.0).unwrap(), 2.0, 0.3),  // d = 6
            (CirParams::new(0.2, 1.0, 1.2).unwrap(), 0.8, 0.4),  // d < 1
        ];
        for (ci, (cir, x0, s)) in cases.into_iter().enumerate() {
            let stepper = CirExactStepper::new(&cir, s).unwrap();
            let mut rng = RngStream::new(17 + ci as u64, 0).rng();
            let m = 20_000;
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..m {
                let v = stepper.step(x0, &mut rng).unwrap();
                sum += v;
                sum_sq += v * v;
            }
            let emp_mean = sum / m as f64;
            let emp_var = sum_sq / m as f64 - emp_mean * emp_mean;
            let decay = (-cir.beta() * s).exp();
            let want = x0 * decay + cir.mean_level() * (1.0 - decay);
            let se = (emp_var / m as f64).sqrt();
            assert!(
                (emp_mean - want).abs() < 4.0 * se,
                "case {ci}: {emp_mean} vs {want} (se {se})"
            );
        }
    }

    #[test]
    fn paths_stay_positive_under_inaccessible_boundary() {
        // 2 alpha >= gamma^2 keeps the origin unreachable.
        let cir = CirParams::new(1.0, 1.0, 1.0).unwrap();
        let path = simulate_cir_exact(&cir, &grid(0.05, 2_000), &config(2)).unwrap();
        assert!(path.strictly_positive());
    }

    #[test]
    fn fixed_seed_reproduces_bit_identical_paths() {
        let cir = CirParams::new(0.25, 1.0, 1.0).unwrap();
        let g = grid(0.1, 100);
        let a = simulate_cir_exact(&cir, &g, &config(8)).unwrap();
        let b = simulate_cir_exact(&cir, &g, &config(8)).unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn zero_volatility_reproduces_the_deterministic_flow() {
        // With gamma = 0 the sampler must return the exact ODE solution
        // x(t) = m + (x0 - m) e^{-beta t} at every grid time.
        let cir = CirParams::new(2.0, 0.5, 0.0).unwrap();
        let g = grid(0.25, 40);
        let path = simulate_cir_exact(
            &cir,
            &g,
            &SimulationConfig {
                x0: Some(1.0),
                ..Default::default()
            },
        )
        .unwrap();
        let m = cir.mean_level();
        for (i, &v) in path.values().iter().enumerate() {
            let t = 0.25 * i as f64;
            let want = m + (1.0 - m) * (-0.5 * t).exp();
            assert!((v - want).abs() < 1e-12, "t={t}: {v} vs {want}");
        }
    }

    #[test]
    fn substeps_do_not_affect_exact_draws() {
        let cir = CirParams::new(0.25, 1.0, 1.0).unwrap();
        let g = grid(0.1, 50);
        let coarse = simulate_cir_exact(&cir, &g, &config(4)).unwrap();
        let refined = simulate_cir_exact(
            &cir,
            &g,
            &SimulationConfig {
                seed: 4,
                substeps: 64,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(coarse.values(), refined.values());
    }
}
