//! Rough elasticity readings from realized quadratic variation.
//!
//! Over one observation step the squared increment has conditional mean
//! sigma^2 Delta lambda^{2k}, so
//!
//! ```text
//! log(QV_i / (sigma^2 Delta)) / (2 log lambda_{(i-1)Delta})  ->  k
//! ```
//!
//! pointwise, and the ratio of two such readings eliminates sigma. Levels
//! near one carry no information (the log denominator vanishes) and must be
//! excluded. The aggregated forms sum absolute numerators and denominators
//! over admissible points, optionally pooling several steps into one realized
//! QV window so the chi-square noise of a lone squared increment averages
//! out.

use crate::error::{Error, Result};
use crate::model::Path;
use crate::numeric::CompensatedSum;
use serde::{Deserialize, Serialize};

/// Default exclusion half-width around the uninformative level 1.
pub const DEFAULT_LEVEL_EPSILON: f64 = 0.1;

/// Which aggregated reading to form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialVariant {
    /// Sums log(QV / (sigma^2 Delta)) readings; needs sigma.
    Single,
    /// Sums log-ratios of QV readings across paired points; sigma-free.
    Ratio,
}

/// How many consecutive steps feed one realized-QV reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QvWindow {
    /// One squared increment per reading (the raw definition).
    PerStep,
    /// ceil(Delta^{-1/2}) steps per reading, so window noise vanishes while
    /// the window's time span still shrinks with Delta.
    Auto,
    /// Explicit window length in steps.
    Fixed(usize),
}

impl QvWindow {
    fn resolve(&self, delta: f64, n: usize) -> Result<usize> {
        let w = match self {
            QvWindow::PerStep => 1,
            QvWindow::Auto => delta.powf(-0.5).ceil().max(1.0) as usize,
            QvWindow::Fixed(w) => *w,
        };
        if w == 0 {
            return Err(Error::ConfigError {
                reason: "QV window length must be at least 1 step".into(),
            });
        }
        Ok(w.min(n.max(1)))
    }
}

/// Aggregated elasticity reading with its admissibility accounting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregatedInitialK {
    pub k_hat: f64,
    pub variant: InitialVariant,
    /// Terms in the aggregate: points for `Single`, pairs for `Ratio`.
    pub used: usize,
    /// Candidate readings that contributed to no term.
    pub excluded: usize,
    /// Realized-QV window length actually used, in steps.
    pub window: usize,
}

fn check_sigma(sigma: f64) -> Result<f64> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::NonPositiveParameter {
            name: "sigma",
            value: sigma,
        });
    }
    Ok(sigma)
}

fn check_increment_index(i: usize, n: usize) -> Result<()> {
    if i < 1 || i > n {
        return Err(Error::DomainError {
            op: "increment index",
            value: i as f64,
        });
    }
    Ok(())
}

/// Elasticity reading from the single increment over ((i-1)Delta, iDelta],
/// with i in 1..=n. Levels within the default exclusion width of 1 are
/// rejected as uninformative.
pub fn initial_k_single(path: &Path, sigma: f64, i: usize) -> Result<f64> {
    let sigma = check_sigma(sigma)?;
    check_increment_index(i, path.n())?;
    let v = path.values();
    let level = v[i - 1];
    if level <= 0.0 {
        return Err(Error::NonPositivePath { index: i - 1 });
    }
    if (level - 1.0).abs() < DEFAULT_LEVEL_EPSILON {
        return Err(Error::NearUnityLevel {
            index: i - 1,
            level,
            epsilon: DEFAULT_LEVEL_EPSILON,
        });
    }
    let inc = v[i] - v[i - 1];
    let qv = inc * inc;
    if qv <= 0.0 {
        return Err(Error::NonPositiveIncrement { index: i });
    }
    Ok((qv / (sigma * sigma * path.delta())).ln() / (2.0 * level.ln()))
}

/// Sigma-free elasticity reading from the increments at i and j, based on
/// the ratio of their QVs. The level ratio must sit outside e^{±epsilon}
/// of 1 (default width).
pub fn initial_k_ratio(path: &Path, i: usize, j: usize) -> Result<f64> {
    check_increment_index(i, path.n())?;
    check_increment_index(j, path.n())?;
    if i == j {
        return Err(Error::NearUnityRatio {
            i,
            j,
            epsilon: DEFAULT_LEVEL_EPSILON,
        });
    }
    let v = path.values();
    for idx in [i, j] {
        if v[idx - 1] <= 0.0 {
            return Err(Error::NonPositivePath { index: idx - 1 });
        }
    }
    let log_ratio = (v[i - 1] / v[j - 1]).ln();
    if log_ratio.abs() < DEFAULT_LEVEL_EPSILON {
        return Err(Error::NearUnityRatio {
            i,
            j,
            epsilon: DEFAULT_LEVEL_EPSILON,
        });
    }
    let mut qv = [0.0; 2];
    for (slot, idx) in qv.iter_mut().zip([i, j]) {
        let inc = v[idx] - v[idx - 1];
        *slot = inc * inc;
        if *slot <= 0.0 {
            return Err(Error::NonPositiveIncrement { index: idx });
        }
    }
    Ok((qv[0] / qv[1]).ln() / (2.0 * log_ratio))
}

struct Block {
    level: f64,
    qv: f64,
}

fn collect_blocks(path: &Path, w: usize) -> Vec<Block> {
    let v = path.values();
    (0..path.n() / w)
        .map(|s| {
            let start = s * w;
            let mut qv = 0.0;
            for j in start + 1..=start + w {
                let inc = v[j] - v[j - 1];
                qv += inc * inc;
            }
            Block {
                level: v[start],
                qv,
            }
        })
        .collect()
}

/// Aggregated elasticity reading over all admissible points of a path.
///
/// `Single` needs sigma and normalizes each window's realized QV by
/// sigma^2·(window·Delta); `Ratio` ignores sigma (pass `None`) and pairs the
/// most widely separated admissible levels so that log-ratio denominators
/// stay large. `epsilon` is the exclusion width around level 1 (`Single`)
/// resp. around log-ratio 0 (`Ratio`).
pub fn initial_k_aggregated(
    path: &Path,
    sigma: Option<f64>,
    epsilon: f64,
    variant: InitialVariant,
    window: QvWindow,
) -> Result<AggregatedInitialK> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::NonPositiveParameter {
            name: "epsilon",
            value: epsilon,
        });
    }
    let w = window.resolve(path.delta(), path.n())?;
    let blocks = collect_blocks(path, w);
    let total = blocks.len();
    let mut num = CompensatedSum::new();
    let mut den = CompensatedSum::new();
    let mut used = 0usize;
    let k_hat = match variant {
        InitialVariant::Single => {
            let sigma = check_sigma(sigma.ok_or_else(|| Error::ConfigError {
                reason: "the single-point variant requires sigma".into(),
            })?)?;
            let norm = sigma * sigma * path.delta() * w as f64;
            for b in &blocks {
                if b.level <= 0.0 || (b.level - 1.0).abs() < epsilon || b.qv <= 0.0 {
                    continue;
                }
                num.add((b.qv / norm).ln().abs());
                den.add(b.level.ln().abs());
                used += 1;
            }
            num.total() / (2.0 * den.total())
        }
        InitialVariant::Ratio => {
            let mut admissible: Vec<&Block> = blocks
                .iter()
                .filter(|b| b.level > 0.0 && b.qv > 0.0)
                .collect();
            admissible.sort_by(|x, y| x.level.total_cmp(&y.level));
            let mut lo = 0;
            let mut hi = admissible.len().saturating_sub(1);
            while lo < hi {
                let (low, high) = (admissible[lo], admissible[hi]);
                let log_ratio = (high.level / low.level).ln();
                if log_ratio < epsilon {
                    // Levels are sorted, so every remaining pair is closer.
                    break;
                }
                num.add((high.qv / low.qv).ln().abs());
                den.add(log_ratio);
                used += 1;
                lo += 1;
                hi -= 1;
            }
            num.total() / (2.0 * den.total())
        }
    };
    if used == 0 {
        return Err(Error::NoAdmissiblePoints { excluded: total });
    }
    let consumed = match variant {
        InitialVariant::Single => used,
        InitialVariant::Ratio => 2 * used,
    };
    Ok(AggregatedInitialK {
        k_hat,
        variant,
        used,
        excluded: total - consumed,
        window: w,
    })
}
