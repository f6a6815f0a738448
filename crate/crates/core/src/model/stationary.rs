//! Stationary laws of the two models.
//!
//! The square-root model's invariant law is Gamma with shape 2 alpha/gamma^2
//! and scale gamma^2/(2 beta); its moments have a closed form. The power
//! model's invariant density is known up to a normalizer,
//!
//! ```text
//! p(x) ~ x^(-2k) exp(psi(x)),
//! psi(x) = (2/sigma^2) (a x^(1-2k)/(1-2k) - b x^(2-2k)/(2-2k)),   k != 1/2,
//! psi(x) = (2a/sigma^2) ln x - (2b/sigma^2) x,                    k  = 1/2,
//! ```
//!
//! which this module normalizes and integrates by adaptive quadrature in
//! log-space (u = ln x), splitting at x = 1.

use crate::error::{Error, Result};
use crate::model::{CirParams, CklsParams};
use crate::numeric::{integrate, ln_gamma};

/// Moment of order q of the square-root model's Gamma invariant law:
/// theta^q Gamma(kappa + q) / Gamma(kappa). Exists iff q > -kappa.
pub fn cir_stationary_moment(q: f64, cir: &CirParams) -> Result<f64> {
    let kappa = cir.stationary_shape();
    if !q.is_finite() || q <= -kappa {
        return Err(Error::MomentDoesNotExist { q, kappa });
    }
    let theta = cir.stationary_scale();
    Ok((q * theta.ln() + ln_gamma(kappa + q) - ln_gamma(kappa)).exp())
}

/// Normalized invariant density of the power model, with a moment evaluator.
#[derive(Debug, Clone)]
pub struct StationaryLawCkls {
    params: CklsParams,
    /// log of the normalizer 1/C where density = exp(log_c - 2k ln x + psi).
    log_c: f64,
}

impl StationaryLawCkls {
    /// Computes the normalizer by quadrature. Requires sigma > 0 (the
    /// deterministic degenerate case has no density).
    pub fn new(params: &CklsParams) -> Result<Self> {
        if params.sigma() <= 0.0 {
            return Err(Error::NonPositiveParameter {
                name: "sigma",
                value: params.sigma(),
            });
        }
        let mut law = Self {
            params: *params,
            log_c: 0.0,
        };
        let log_z = law.log_weighted_mass(0.0)?;
        law.log_c = -log_z;
        Ok(law)
    }

    pub fn params(&self) -> &CklsParams {
        &self.params
    }

    fn psi(&self, x: f64) -> f64 {
        let p = &self.params;
        let two_over_s2 = 2.0 / (p.sigma() * p.sigma());
        let k = p.k();
        if k == 0.5 {
            two_over_s2 * (p.a() * x.ln() - p.b() * x)
        } else {
            two_over_s2
                * (p.a() * x.powf(1.0 - 2.0 * k) / (1.0 - 2.0 * k)
                    - p.b() * x.powf(2.0 - 2.0 * k) / (2.0 - 2.0 * k))
        }
    }

    /// Exponent of the u-space integrand for the q-th moment:
    /// g(u) = (1 + q - 2k) u + psi(e^u).
    fn exponent(&self, q: f64, u: f64) -> f64 {
        (1.0 + q - 2.0 * self.params.k()) * u + self.psi(u.exp())
    }

    /// log of integral_0^inf x^q x^(-2k) exp(psi(x)) dx, by shifted quadrature
    /// in u = ln x split at u = 0.
    fn log_weighted_mass(&self, q: f64) -> Result<f64> {
        let g = |u: f64| self.exponent(q, u);
        // Locate the exponent's mode on a coarse lattice.
        let mut peak = f64::NEG_INFINITY;
        let mut peak_u = 0.0;
        let mut u = -40.0;
        while u <= 40.0 {
            let v = g(u);
            if v > peak {
                peak = v;
                peak_u = u;
            }
            u += 0.25;
        }
        if !peak.is_finite() {
            return Err(Error::QuadratureFailure {
                tol: 1e-10,
                err: f64::INFINITY,
            });
        }
        // Expand until the integrand is negligible relative to the peak.
        let mut lo = peak_u;
        while g(lo) > peak - 120.0 && lo > -700.0 {
            lo -= 1.0;
        }
        let mut hi = peak_u;
        while g(hi) > peak - 120.0 && hi < 700.0 {
            hi += 1.0;
        }
        let f = |u: f64| {
            let e = g(u) - peak;
            if e < -700.0 {
                0.0
            } else {
                e.exp()
            }
        };
        let tol = 1e-12 * (hi - lo);
        let mass = if lo < 0.0 && hi > 0.0 {
            integrate(&f, lo, 0.0, tol)? + integrate(&f, 0.0, hi, tol)?
        } else {
            integrate(&f, lo, hi, tol)?
        };
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::QuadratureFailure {
                tol: 1e-10,
                err: mass,
            });
        }
        Ok(peak + mass.ln())
    }

    /// Density value; zero off the support.
    pub fn density(&self, x: f64) -> f64 {
        if x <= 0.0 || !x.is_finite() {
            return 0.0;
        }
        let e = self.log_c - 2.0 * self.params.k() * x.ln() + self.psi(x);
        if e < -700.0 {
            0.0
        } else {
            e.exp()
        }
    }

    /// Moment of order q under the invariant law.
    ///
    /// For interior elasticity (k > 1/2) every real order is finite: the
    /// density vanishes faster than any power at both ends. At k = 1/2 the
    /// law is Gamma with shape 2a/sigma^2, so orders q <= -2a/sigma^2 blow up.
    pub fn moment(&self, q: f64) -> Result<f64> {
        let p = &self.params;
        if p.k() == 0.5 {
            let kappa = 2.0 * p.a() / (p.sigma() * p.sigma());
            if q <= -kappa {
                return Err(Error::MomentDoesNotExist { q, kappa });
            }
        }
        Ok((self.log_weighted_mass(q)? + self.log_c).exp())
    }

    /// Almost-sure limit of the plug-in drift statistic computed from data
    /// generated by the power model itself:
    /// 2 sigma^2 (1-k)^2 m_{2-2k} / (m_{4-4k} - m_{2-2k}^2), with m_r the
    /// invariant moments of the level. Useful for predicting where the
    /// estimation pipeline settles at large horizons (see the README's
    /// limitations discussion).
    pub fn plugin_beta_ergodic_limit(&self) -> Result<f64> {
        let k = self.params.k();
        let s = self.params.sigma();
        let m2 = self.moment(2.0 - 2.0 * k)?;
        let m4 = self.moment(4.0 - 4.0 * k)?;
        let denom = m4 - m2 * m2;
        if denom <= 0.0 {
            return Err(Error::DegenerateSample);
        }
        Ok(2.0 * s * s * (1.0 - k) * (1.0 - k) * m2 / denom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cir(alpha: f64, beta: f64, gamma: f64) -> CirParams {
        CirParams::new(alpha, beta, gamma).unwrap()
    }

    #[test]
    fn gamma_moments_match_closed_forms() {
        let cases = [
            cir(1.0, 1.0, 2.0),
            cir(0.25, 0.5, 1.0),
            cir(6.0, 2.0, 1.0),
            cir(3.0, 0.7, 1.3),
        ];
        for p in cases {
            let (a, b, g) = (p.alpha(), p.beta(), p.gamma());
            let m1 = a / b;
            let m2 = a * (a + g * g / 2.0) / (b * b);
            let m3 = a * (a + g * g) * (a + g * g / 2.0) / (b * b * b);
            for (q, want) in [(1.0, m1), (2.0, m2), (3.0, m3)] {
                let got = cir_stationary_moment(q, &p).unwrap();
                assert!(
                    (got - want).abs() <= 1e-12 * want,
                    "q={q}: {got} vs {want}"
                );
            }
            assert!((cir_stationary_moment(0.0, &p).unwrap() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn gamma_fractional_moment_reference() {
        // (alpha=1, beta=1, gamma=2): kappa=1/2, theta=2;
        // m_{1/2} = sqrt(2) Gamma(1) / Gamma(1/2) = sqrt(2/pi).
        let got = cir_stationary_moment(0.5, &cir(1.0, 1.0, 2.0)).unwrap();
        assert!((got - 0.797884560802865356).abs() < 1e-13);
    }

    #[test]
    fn gamma_moment_existence_boundary() {
        let p = cir(1.0, 1.0, 2.0); // kappa = 1/2
        assert!(matches!(
            cir_stationary_moment(-0.5, &p),
            Err(Error::MomentDoesNotExist { .. })
        ));
        assert!(cir_stationary_moment(-0.49, &p).is_ok());
    }

    fn law(a: f64, b: f64, sigma: f64, k: f64) -> StationaryLawCkls {
        StationaryLawCkls::new(&CklsParams::new(a, b, sigma, k, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn density_mass_is_one() {
        for l in [law(1.0, 1.0, 1.0, 0.75), law(2.0, 0.5, 0.8, 0.6)] {
            assert!((l.moment(0.0).unwrap() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn mean_is_drift_fixed_point() {
        // Stationarity forces E[a - b lambda] = 0, i.e. m1 = a/b exactly.
        for (a, b) in [(1.0, 1.0), (2.0, 0.5)] {
            let l = law(a, b, 1.0, 0.75);
            assert!((l.moment(1.0).unwrap() - a / b).abs() < 1e-7 * (a / b));
        }
    }

    #[test]
    fn interior_elasticity_moments_match_quadrature_oracle() {
        // Frozen against an independent arbitrary-precision quadrature.
        let l = law(1.0, 1.0, 1.0, 0.75);
        let cases = [
            (0.5, 0.942726705768746679),
            (1.0, 1.0),
            (2.0, 1.59636335288437334),
        ];
        for (q, want) in cases {
            let got = l.moment(q).unwrap();
            assert!(
                (got - want).abs() <= 1e-7 * want,
                "q={q}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn boundary_elasticity_reduces_to_gamma_law() {
        // k=1/2 invariant law is Gamma(2a/sigma^2, rate 2b/sigma^2); for
        // (a=2, b=1, sigma=1) the mean is 2 and the density matches pointwise.
        let l = law(2.0, 1.0, 1.0, 0.5);
        assert!((l.moment(1.0).unwrap() - 2.0).abs() < 1e-6);
        let shape = 4.0_f64;
        let rate = 2.0_f64;
        for x in [0.3_f64, 1.0, 2.0, 4.0] {
            let want = (shape * rate.ln() - ln_gamma(shape)).exp()
                * x.powf(shape - 1.0)
                * (-rate * x).exp();
            let got = l.density(x);
            assert!(
                (got - want).abs() <= 1e-6 * want,
                "x={x}: {got} vs {want}"
            );
        }
        let m2_gamma = shape * (shape + 1.0) / (rate * rate);
        assert!((l.moment(2.0).unwrap() - m2_gamma).abs() < 1e-6 * m2_gamma);
    }

    #[test]
    fn negative_moments_exist_for_interior_elasticity() {
        let l = law(1.0, 1.0, 1.0, 0.75);
        let m = l.moment(-2.0).unwrap();
        assert!(m.is_finite() && m > 0.0);
    }

    #[test]
    fn density_vanishes_off_support() {
        let l = law(1.0, 1.0, 1.0, 0.75);
        assert_eq!(l.density(0.0), 0.0);
        assert_eq!(l.density(-1.0), 0.0);
    }

    #[test]
    fn plugin_limit_reference_value() {
        // Frozen against an arbitrary-precision quadrature of the moment
        // ratio at (a=1, b=1, sigma=1, k=0.75). Note the limit is not the
        // transformed-model drift 2b(1-k) = 0.5; see the README discussion.
        let l = law(1.0, 1.0, 1.0, 0.75);
        let got = l.plugin_beta_ergodic_limit().unwrap();
        assert!((got - 1.05908776107394634).abs() < 1e-6);
    }

    #[test]
    fn rejects_zero_volatility() {
        let p = CklsParams::new(1.0, 1.0, 0.0, 0.75, 1.0).unwrap();
        assert!(StationaryLawCkls::new(&p).is_err());
    }
}
