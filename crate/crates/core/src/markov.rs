//! Two-state Markov chains over the alphabet {+1, -1}.
//!
//! A chain is parameterised either by its switching rates or by the pair
//! (bias, correlation) that the rest of the library works in. With
//! `alpha` the probability of leaving +1 and `beta` the probability of
//! entering it, the one-step transition matrix (rows: from +1, from -1;
//! columns: to +1, to -1) is
//!
//! ```text
//! P = | 1 - alpha    alpha   |
//!     |   beta     1 - beta  |
//! ```
//!
//! The stationary probability of +1 is b = beta / (alpha + beta) and the
//! second eigenvalue is lambda = 1 - alpha - beta. We use the inverse map
//!
//! ```text
//! alpha = (1 - c)(1 - b),    beta = (1 - c) b
//! ```
//!
//! so that lambda equals the correlation parameter c directly and c = 0
//! recovers independent draws with P(+1) = b.
//!
//! Because the chain has only two states, the n-step matrix has the
//! closed form
//!
//! ```text
//! P^n = | b + (1-b) c^n    (1-b)(1 - c^n) |
//!       | b (1 - c^n)      (1-b) + b c^n  |
//! ```
//!
//! From it, the probability that two samples n steps apart agree is
//! rho(n) = b P11(n) + (1-b) P22(n), and the expected product of the two
//! (+1/-1 valued) samples is e(n) = 2 rho(n) - 1. Substituting the matrix
//! entries collapses e(n) to
//!
//! ```text
//! e(n) = m^2 + (1 - m^2) c^n,    m = 2b - 1,
//! ```
//!
//! the form used to invert a measured one-step agreement back into a
//! correlation estimate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of one stationary two-state chain, kept in both
/// parameterisations so either view is free to read.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainStatistics {
    /// Stationary probability of +1.
    pub bias: f64,
    /// Second eigenvalue of the transition matrix, the per-step memory.
    pub correlation: f64,
    /// P(next = -1 | current = +1).
    pub alpha: f64,
    /// P(next = +1 | current = -1).
    pub beta: f64,
}

impl ChainStatistics {
    /// Build from bias b in [0, 1] and correlation c in [0, 1).
    ///
    /// c = 1 would freeze the chain completely (alpha + beta = 0), which
    /// has no stationary bias, so it is rejected as degenerate.
    pub fn from_params(bias: f64, correlation: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&bias) {
            return Err(Error::ParameterRange {
                name: "bias",
                value: bias,
                min: 0.0,
                max: 1.0,
            });
        }
        if !(0.0..=1.0).contains(&correlation) {
            return Err(Error::ParameterRange {
                name: "correlation",
                value: correlation,
                min: 0.0,
                max: 1.0,
            });
        }
        if correlation >= 1.0 {
            return Err(Error::DegenerateChain);
        }
        Ok(Self {
            bias,
            correlation,
            alpha: (1.0 - correlation) * (1.0 - bias),
            beta: (1.0 - correlation) * bias,
        })
    }

    /// Build from the switching rates directly. Accepts any rates in
    /// [0, 1] with alpha + beta > 0; the resulting correlation may be
    /// negative (an anti-persistent chain), which the sampler and the
    /// agreement curve handle fine.
    pub fn from_rates(alpha: f64, beta: f64) -> Result<Self> {
        for (name, value) in [("alpha", alpha), ("beta", beta)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ParameterRange {
                    name,
                    value,
                    min: 0.0,
                    max: 1.0,
                });
            }
        }
        let total = alpha + beta;
        if total == 0.0 {
            return Err(Error::DegenerateChain);
        }
        Ok(Self {
            bias: beta / total,
            correlation: 1.0 - total,
            alpha,
            beta,
        })
    }

    /// Mean of a single sample, m = 2b - 1.
    pub fn mean(&self) -> f64 {
        2.0 * self.bias - 1.0
    }

    /// The n-step transition matrix in closed form. `n_step(0)` is the
    /// identity and `n_step(1)` reproduces the one-step matrix.
    pub fn n_step(&self, n: u32) -> [[f64; 2]; 2] {
        let b = self.bias;
        let decay = self.correlation.powi(n as i32);
        [
            [b + (1.0 - b) * decay, (1.0 - b) * (1.0 - decay)],
            [b * (1.0 - decay), (1.0 - b) + b * decay],
        ]
    }

    /// Probability that two samples n steps apart are equal.
    pub fn rho(&self, n: u32) -> f64 {
        let p = self.n_step(n);
        self.bias * p[0][0] + (1.0 - self.bias) * p[1][1]
    }

    /// Expected product of two samples n steps apart,
    /// e(n) = 2 rho(n) - 1 = m^2 + (1 - m^2) c^n.
    pub fn agreement(&self, n: u32) -> f64 {
        let m2 = self.mean() * self.mean();
        m2 + (1.0 - m2) * self.correlation.powi(n as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(ChainStatistics::from_params(-0.1, 0.0).is_err());
        assert!(ChainStatistics::from_params(1.1, 0.0).is_err());
        assert!(ChainStatistics::from_params(0.5, -0.2).is_err());
        assert!(matches!(
            ChainStatistics::from_params(0.5, 1.0),
            Err(Error::DegenerateChain)
        ));
        assert!(matches!(
            ChainStatistics::from_rates(0.0, 0.0),
            Err(Error::DegenerateChain)
        ));
    }

    #[test]
    fn zero_step_matrix_is_identity() {
        let s = ChainStatistics::from_params(0.73, 0.41).unwrap();
        let p = s.n_step(0);
        assert_eq!(p, [[1.0, 0.0], [0.0, 1.0]]);
        assert!((s.agreement(0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rows_stay_stochastic() {
        let s = ChainStatistics::from_params(0.8, 0.6).unwrap();
        for n in 0..30 {
            let p = s.n_step(n);
            assert!((p[0][0] + p[0][1] - 1.0).abs() < 1e-12);
            assert!((p[1][0] + p[1][1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn agreement_relaxes_to_squared_mean() {
        let s = ChainStatistics::from_params(0.9, 0.5).unwrap();
        let m2 = s.mean() * s.mean();
        assert!((s.agreement(60) - m2).abs() < 1e-12);
    }

    #[test]
    fn negative_correlation_from_rates() {
        let s = ChainStatistics::from_rates(0.9, 0.8).unwrap();
        assert!(s.correlation < 0.0);
        // odd separations disagree more often than even ones
        assert!(s.agreement(1) < s.agreement(2));
    }
}
