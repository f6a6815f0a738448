//! Validated parameter sets for the two diffusions and the map between them.
//!
//! ```text
//! d lambda = (a - b lambda) dt + sigma lambda^k dW     (power model)
//! d X      = (alpha - beta X) dt + gamma sqrt(X) dW    (square-root model)
//! ```
//!
//! The transform `x -> L^2 x^(2-2k) / (4(1-k)^2)` carries the first onto the
//! second with alpha = sigma^2 L^2 / 4, beta = 2b(1-k), gamma = sigma L, so
//! 4 alpha = gamma^2 always holds for mapped parameters (the transformed model
//! sits exactly on one degree of freedom, violating Feller's condition).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the power-volatility model, validated on construction.
///
/// Admissibility: a > 0, b > 0, L > 0, sigma >= 0, and either 1/2 < k < 1 or
/// k = 1/2 with 2a >= sigma^2 (so the square-root boundary stays unreachable).
/// sigma = 0 is accepted as the deterministic degenerate case; it is useful as
/// an ODE oracle, and every operation that genuinely needs noise (the
/// change-of-measure kernel, estimation) checks sigma > 0 itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCkls", into = "RawCkls")]
pub struct CklsParams {
    a: f64,
    b: f64,
    sigma: f64,
    k: f64,
    l: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawCkls {
    a: f64,
    b: f64,
    sigma: f64,
    k: f64,
    #[serde(rename = "L")]
    l: f64,
}

impl From<CklsParams> for RawCkls {
    fn from(p: CklsParams) -> Self {
        RawCkls {
            a: p.a,
            b: p.b,
            sigma: p.sigma,
            k: p.k,
            l: p.l,
        }
    }
}

impl TryFrom<RawCkls> for CklsParams {
    type Error = Error;
    fn try_from(r: RawCkls) -> Result<Self> {
        CklsParams::new(r.a, r.b, r.sigma, r.k, r.l)
    }
}

impl CklsParams {
    pub fn new(a: f64, b: f64, sigma: f64, k: f64, l: f64) -> Result<Self> {
        check_positive("a", a)?;
        check_positive("b", b)?;
        check_positive("L", l)?;
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::NonPositiveParameter {
                name: "sigma",
                value: sigma,
            });
        }
        if !(0.5..1.0).contains(&k) {
            return Err(Error::ElasticityOutOfRange { k });
        }
        if k == 0.5 && 2.0 * a < sigma * sigma {
            return Err(Error::FellerViolation {
                two_a: 2.0 * a,
                sigma_sq: sigma * sigma,
            });
        }
        Ok(Self { a, b, sigma, k, l })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn l(&self) -> f64 {
        self.l
    }

    /// Long-run mean a/b, the fixed point of the drift.
    pub fn mean_level(&self) -> f64 {
        self.a / self.b
    }

    /// Parameters of the transformed square-root model.
    ///
    /// gamma = sigma L and alpha = gamma^2 / 4 so that 4 alpha = gamma^2 is
    /// exact in floating point, not merely up to rounding.
    pub fn to_cir(&self) -> Result<CirParams> {
        let gamma = self.sigma * self.l;
        CirParams::new(
            gamma * gamma / 4.0,
            2.0 * self.b * (1.0 - self.k),
            gamma,
        )
    }
}

/// Parameters of the square-root model, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCir", into = "RawCir")]
pub struct CirParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawCir {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl From<CirParams> for RawCir {
    fn from(p: CirParams) -> Self {
        RawCir {
            alpha: p.alpha,
            beta: p.beta,
            gamma: p.gamma,
        }
    }
}

impl TryFrom<RawCir> for CirParams {
    type Error = Error;
    fn try_from(r: RawCir) -> Result<Self> {
        CirParams::new(r.alpha, r.beta, r.gamma)
    }
}

impl CirParams {
    /// gamma = 0 is admitted: the model degenerates to the deterministic
    /// mean-reversion flow, which serves as a closed-form oracle for
    /// integration-error checks. Quantities that need noise (stationary
    /// shape, degrees of freedom) are then infinite or zero and callers
    /// requiring gamma > 0 must check it themselves.
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        check_positive("alpha", alpha)?;
        check_positive("beta", beta)?;
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::NonPositiveParameter {
                name: "gamma",
                value: gamma,
            });
        }
        Ok(Self { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Long-run mean alpha/beta.
    pub fn mean_level(&self) -> f64 {
        self.alpha / self.beta
    }

    /// Degrees of freedom d = 4 alpha / gamma^2 of the transition law.
    pub fn degrees_of_freedom(&self) -> f64 {
        4.0 * self.alpha / (self.gamma * self.gamma)
    }

    /// Shape kappa = 2 alpha / gamma^2 of the Gamma invariant law.
    pub fn stationary_shape(&self) -> f64 {
        2.0 * self.alpha / (self.gamma * self.gamma)
    }

    /// Scale theta = gamma^2 / (2 beta) of the Gamma invariant law.
    pub fn stationary_scale(&self) -> f64 {
        self.gamma * self.gamma / (2.0 * self.beta)
    }

    /// Whether 2 alpha >= gamma^2, i.e. the origin is unreachable.
    pub fn feller_holds(&self) -> bool {
        2.0 * self.alpha >= self.gamma * self.gamma
    }
}

/// Invert the drift relation beta = 2b(1-k): returns 1 - beta_hat/(2b).
///
/// No range clamping; the reporting layer flags estimates outside [1/2, 1).
pub fn elasticity_from_beta(beta_hat: f64, b: f64) -> Result<f64> {
    check_positive("b", b)?;
    if !beta_hat.is_finite() {
        return Err(Error::DomainError {
            op: "elasticity_from_beta",
            value: beta_hat,
        });
    }
    Ok(1.0 - beta_hat / (2.0 * b))
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveParameter { name, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_interior_parameters() {
        assert!(CklsParams::new(1.0, 1.0, 1.0, 0.75, 1.0).is_ok());
    }

    #[test]
    fn rejects_feller_violation_at_boundary_elasticity() {
        // k = 1/2 with 2a = 2 < sigma^2 = 4.
        let err = CklsParams::new(1.0, 1.0, 2.0, 0.5, 1.0).unwrap_err();
        assert!(matches!(err, Error::FellerViolation { .. }));
    }

    #[test]
    fn accepts_feller_satisfying_boundary() {
        assert!(CklsParams::new(1.0, 1.0, 1.0, 0.5, 1.0).is_ok());
    }

    #[test]
    fn rejects_unit_elasticity() {
        let err = CklsParams::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::ElasticityOutOfRange { k } if k == 1.0));
    }

    #[test]
    fn rejects_low_elasticity() {
        assert!(CklsParams::new(1.0, 1.0, 1.0, 0.49, 1.0).is_err());
    }

    #[test]
    fn rejects_nonpositive_scale_parameters() {
        assert!(matches!(
            CklsParams::new(0.0, 1.0, 1.0, 0.75, 1.0),
            Err(Error::NonPositiveParameter { name: "a", .. })
        ));
        assert!(CklsParams::new(1.0, -1.0, 1.0, 0.75, 1.0).is_err());
        assert!(CklsParams::new(1.0, 1.0, 1.0, 0.75, 0.0).is_err());
        assert!(CklsParams::new(1.0, 1.0, -0.5, 0.75, 1.0).is_err());
    }

    #[test]
    fn zero_volatility_is_the_deterministic_degenerate_case() {
        let p = CklsParams::new(1.0, 1.0, 0.0, 0.75, 1.0).unwrap();
        assert_eq!(p.sigma(), 0.0);
    }

    #[test]
    fn parameter_map_matches_hand_values() {
        // (sigma=2, L=1, b=1, k=0.5) -> (alpha=1, beta=1, gamma=2).
        let p = CklsParams::new(3.0, 1.0, 2.0, 0.5, 1.0).unwrap();
        let c = p.to_cir().unwrap();
        assert_eq!(c.alpha(), 1.0);
        assert_eq!(c.beta(), 1.0);
        assert_eq!(c.gamma(), 2.0);
    }

    #[test]
    fn mapped_parameters_lie_on_the_degenerate_ray() {
        // 4 alpha = gamma^2 exactly, for a lattice of admissible inputs.
        for &k in &[0.5, 0.6, 0.75, 0.9, 0.99] {
            for &sigma in &[0.3, 1.0, 2.5] {
                for &l in &[0.5, 1.0, 7.0] {
                    let p = match CklsParams::new(5.0, 1.3, sigma, k, l) {
                        Ok(p) => p,
                        Err(_) => continue,
                    };
                    let c = p.to_cir().unwrap();
                    assert_eq!(4.0 * c.alpha(), c.gamma() * c.gamma());
                    assert!((c.degrees_of_freedom() - 1.0).abs() < 1e-15);
                    assert!(!c.feller_holds());
                }
            }
        }
    }

    #[test]
    fn elasticity_inverts_the_drift_map() {
        for &k in &[0.5, 0.6180339887, 0.75, 0.925] {
            for &b in &[0.25, 1.0, 3.5] {
                let beta = 2.0 * b * (1.0 - k);
                let got = elasticity_from_beta(beta, b).unwrap();
                assert!((got - k).abs() < 1e-14);
            }
        }
        assert_eq!(elasticity_from_beta(1.0, 1.0).unwrap(), 0.5);
        assert_eq!(elasticity_from_beta(0.0, 1.0).unwrap(), 1.0);
        assert!(elasticity_from_beta(1.0, 0.0).is_err());
    }

    #[test]
    fn serde_roundtrip_revalidates() {
        let p = CklsParams::new(1.0, 2.0, 0.5, 0.8, 1.5).unwrap();
        let js = serde_json::to_string(&p).unwrap();
        let back: CklsParams = serde_json::from_str(&js).unwrap();
        assert_eq!(p, back);
        let bad = r#"{"a":1.0,"b":1.0,"sigma":1.0,"k":1.0,"L":1.0}"#;
        assert!(serde_json::from_str::<CklsParams>(bad).is_err());
    }

    #[test]
    fn zero_volatility_square_root_model_is_admitted() {
        let c = CirParams::new(2.0, 0.5, 0.0).unwrap();
        assert_eq!(c.mean_level(), 4.0);
        assert!(c.feller_holds());
        assert!(CirParams::new(2.0, 0.5, -0.1).is_err());
        assert!(CirParams::new(2.0, 0.5, f64::NAN).is_err());
    }
}
