//! Closed-form capacity estimates used as static baselines. All
//! logarithms are natural.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which closed-form curve produced an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineModel {
    /// (1 - 2 delta)^2 / 4 * N / ln N, the classical worst-case bound
    /// for independent unbiased patterns with recall radius delta.
    McEliece,
    /// N / (gamma ln N) with gamma from the bias curve.
    LoweBias,
    /// N / (gamma ln N) with gamma from the correlation curve.
    LoweCorr,
}

impl fmt::Display for BaselineModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BaselineModel::McEliece => "mceliece",
            BaselineModel::LoweBias => "lowe-bias",
            BaselineModel::LoweCorr => "lowe-corr",
        };
        f.write_str(name)
    }
}

/// A static capacity figure with the curve it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StaticEstimate {
    pub model: BaselineModel,
    /// Real-valued capacity before truncation.
    pub capacity: f64,
    /// The gamma denominator, when the model has one.
    pub gamma: Option<f64>,
}

impl StaticEstimate {
    /// Whole-pattern capacity: the real value truncated toward zero.
    pub fn floor(&self) -> usize {
        if self.capacity <= 0.0 {
            0
        } else {
            self.capacity as usize
        }
    }
}

fn check_n(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "capacity curves need n >= 2, got {n}"
        )));
    }
    Ok(n as f64)
}

/// Capacity for recall from probes within relative distance `delta` of a
/// stored pattern: ((1 - 2 delta)^2 / 4) * N / ln N.
pub fn mceliece_capacity(n: usize, delta: f64) -> Result<StaticEstimate> {
    let nf = check_n(n)?;
    if !(0.0..0.5).contains(&delta) {
        return Err(Error::ParameterRange {
            name: "delta",
            value: delta,
            min: 0.0,
            max: 0.5,
        });
    }
    let coeff = (1.0 - 2.0 * delta).powi(2) / 4.0;
    Ok(StaticEstimate {
        model: BaselineModel::McEliece,
        capacity: coeff * nf / nf.ln(),
        gamma: None,
    })
}

/// Denominator for biased independent patterns with P(+1) = b:
/// gamma = 3 / (8 b^2 (1 - b)^2). Unbiased patterns give 6.
pub fn gamma_bias(b: f64) -> f64 {
    3.0 / (8.0 * b * b * (1.0 - b) * (1.0 - b))
}

/// Denominator for unbiased chains with one-step memory c:
/// gamma = 48 c (1 - c) (c^2 + (1 - c)^2). Vanishes at both ends of the
/// correlation range, so callers bound it below before dividing.
pub fn gamma_corr(c: f64) -> f64 {
    48.0 * c * (1.0 - c) * (c * c + (1.0 - c) * (1.0 - c))
}

/// N / (gamma ln N), tagged with the model the gamma came from.
pub fn lowe_capacity(n: usize, gamma: f64, model: BaselineModel) -> Result<StaticEstimate> {
    let nf = check_n(n)?;
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "gamma must be positive and finite, got {gamma}"
        )));
    }
    Ok(StaticEstimate {
        model,
        capacity: nf / (gamma * nf.ln()),
        gamma: Some(gamma),
    })
}
