//! The level transform between the two models and its inverse:
//!
//! ```text
//! T(x)      = L^2 / (4 (1-k)^2) * x^(2-2k)
//! T^(-1)(y) = (2 (1-k) sqrt(y) / L)^(1 / (1-k))
//! ```
//!
//! T is strictly increasing on [0, inf) for k in [1/2, 1).

use crate::error::{Error, Result};
use crate::numeric::pos_pow;

/// Forward transform at a single level. Domain: x >= 0, k in [1/2, 1), L > 0.
pub fn transform_level(x: f64, k: f64, l: f64) -> Result<f64> {
    let map = LevelMap::new(k, l)?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::DomainError {
            op: "transform_level",
            value: x,
        });
    }
    Ok(map.forward(x))
}

/// Inverse transform at a single level. Domain: y >= 0.
pub fn transform_level_inverse(y: f64, k: f64, l: f64) -> Result<f64> {
    let map = LevelMap::new(k, l)?;
    if !(y >= 0.0) || !y.is_finite() {
        return Err(Error::DomainError {
            op: "transform_level_inverse",
            value: y,
        });
    }
    Ok(map.inverse(y))
}

/// Precomputed transform constants for mapping whole paths without
/// re-deriving the coefficient at every point.
#[derive(Debug, Clone, Copy)]
pub struct LevelMap {
    coef: f64,
    expo: f64,
    inv_expo: f64,
    inv_coef: f64,
}

impl LevelMap {
    pub fn new(k: f64, l: f64) -> Result<Self> {
        if !(0.5..1.0).contains(&k) {
            return Err(Error::ElasticityOutOfRange { k });
        }
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::NonPositiveParameter { name: "L", value: l });
        }
        let one_minus = 1.0 - k;
        Ok(Self {
            coef: l * l / (4.0 * one_minus * one_minus),
            expo: 2.0 - 2.0 * k,
            inv_expo: 1.0 / one_minus,
            inv_coef: 2.0 * one_minus / l,
        })
    }

    #[inline]
    pub fn forward(&self, x: f64) -> f64 {
        self.coef * pos_pow(x, self.expo)
    }

    #[inline]
    pub fn inverse(&self, y: f64) -> f64 {
        pos_pow(self.inv_coef * y.sqrt(), self.inv_expo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_hand_values() {
        // x = 1 maps to the bare coefficient.
        for &(k, l) in &[(0.5, 1.0), (0.75, 2.0), (0.9, 0.5)] {
            let want = l * l / (4.0 * (1.0 - k) * (1.0 - k));
            assert!((transform_level(1.0, k, l).unwrap() - want).abs() < 1e-15);
        }
        // (x=3, k=0.5, L=2) -> 4/(4*0.25) * 3 = 12.
        assert!((transform_level(3.0, 0.5, 2.0).unwrap() - 12.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_hand_values() {
        assert!((transform_level_inverse(12.0, 0.5, 2.0).unwrap() - 3.0).abs() < 1e-12);
        let y = 1.0 / (4.0 * 0.25 * 0.25);
        assert!((transform_level_inverse(y, 0.75, 1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn roundtrip_on_log_grid() {
        for &k in &[0.5, 0.6, 0.75, 0.9, 0.99] {
            for &l in &[0.5, 1.0, 2.0] {
                let mut x = 0.01;
                while x <= 100.0 {
                    let y = transform_level(x, k, l).unwrap();
                    let back = transform_level_inverse(y, k, l).unwrap();
                    assert!(
                        (back - x).abs() <= 1e-12 * x,
                        "k={k} l={l} x={x} back={back}"
                    );
                    x *= 1.77;
                }
            }
        }
    }

    #[test]
    fn forward_is_strictly_increasing() {
        let map = LevelMap::new(0.75, 1.0).unwrap();
        let mut prev = -1.0;
        for i in 0..200 {
            let x = 1e-3 * (1.08f64).powi(i);
            let y = map.forward(x);
            assert!(y > prev);
            prev = y;
        }
    }

    #[test]
    fn zero_maps_to_zero_both_ways() {
        assert_eq!(transform_level(0.0, 0.75, 1.0).unwrap(), 0.0);
        assert_eq!(transform_level_inverse(0.0, 0.75, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_domains() {
        assert!(transform_level(-1.0, 0.75, 1.0).is_err());
        assert!(transform_level(1.0, 1.0, 1.0).is_err());
        assert!(transform_level(1.0, 0.75, 0.0).is_err());
        assert!(transform_level_inverse(-0.5, 0.75, 1.0).is_err());
        assert!(transform_level(f64::INFINITY, 0.75, 1.0).is_err());
    }
}
