//! Running interference estimates for sequentially stored patterns.
//!
//! When pattern m sits in a network holding M patterns, its activation
//! at site n splits into a signal term and a crosstalk term:
//!
//! ```text
//! a_n^m = x_n^m (N - 1) / N + kappa_n^m
//! kappa_n^m = (1/N) * sum over mu != m, j != n of x_n^mu x_j^mu x_j^m
//! ```
//!
//! The site flips, destroying the stored bit, once the interference
//! chi_nm = -x_n^m kappa_n^m outweighs the signal. With the zero
//! diagonal the signal is (N - 1)/N, and since N * chi is an integer for
//! +1/-1 patterns, "chi >= 1 somewhere" is exactly "some stored pattern
//! is no longer a fixed point". The monitor threshold defaults to 1 for
//! that reason.
//!
//! A [`CrosstalkMonitor`] watches a network being filled and maintains
//! one interference column per stored pattern. On each store it can
//! compute the new pattern's own column exactly from the weight matrix
//! alone. What it cannot do without retaining every old pattern is
//! update the old columns exactly, so three weighting modes are offered:
//!
//! * `Expectation`: scale the new column by the expected agreement
//!   e(sep) between patterns `sep` stores apart and add that to each old
//!   column. Under independent patterns e(sep) is zero and old columns
//!   simply freeze.
//! * `Raw`: the same update driven by the agreement probability
//!   rho(sep) = (1 + e(sep))/2, which never vanishes and so keeps
//!   inflating old columns even for unrelated patterns.
//! * `Exact`: retain the patterns and apply the true increment. This
//!   mode exists as the reference the cheap modes are judged against;
//!   its flag provably trails the first real recall failure by exactly
//!   one store.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopfield::{Network, WeightMatrix};
use crate::markov::ChainStatistics;

/// Interference level at which a stored bit is considered destroyed.
pub const DESTRUCTIVE_THRESHOLD: f64 = 1.0;

/// How the monitor propagates a new store into the old columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightingMode {
    Expectation,
    Raw,
    Exact,
}

impl fmt::Display for WeightingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            WeightingMode::Expectation => "expectation",
            WeightingMode::Raw => "raw",
            WeightingMode::Exact => "exact",
        };
        f.write_str(name)
    }
}

impl FromStr for WeightingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "expectation" => Ok(WeightingMode::Expectation),
            "raw" => Ok(WeightingMode::Raw),
            "exact" => Ok(WeightingMode::Exact),
            other => Err(Error::InvalidArgument(format!(
                "unknown weighting mode '{other}', expected expectation, raw or exact"
            ))),
        }
    }
}

/// Outcome of scanning an interference matrix against a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityVerdict {
    /// Largest interference entry seen.
    pub worst: f64,
    /// The threshold the scan compared against.
    pub threshold: f64,
    /// True exactly when `worst >= threshold`.
    pub over: bool,
}

/// Scan a whole interference matrix (one inner vector per stored
/// pattern) and report the worst entry. An empty matrix reads as zero
/// interference.
pub fn check_capacity(chi: &[Vec<f64>], threshold: f64) -> CapacityVerdict {
    let worst = chi
        .iter()
        .flat_map(|col| col.iter().copied())
        .fold(0.0f64, f64::max);
    CapacityVerdict {
        worst,
        threshold,
        over: worst >= threshold,
    }
}

/// Interference column a pattern would acquire if stored now, measured
/// against the weights as they are before that store: entry i is
/// -x_i * (W x)_i.
pub fn new_column(weights: &WeightMatrix, x: &[i8]) -> Result<Vec<f64>> {
    let a = weights.activation(x)?;
    Ok(a.iter()
        .zip(x.iter())
        .map(|(&ai, &xi)| -f64::from(xi) * ai)
        .collect())
}

/// The literal crosstalk triple sum for pattern m at site n, computed in
/// integer arithmetic and scaled once at the end.
pub fn exact_crosstalk_kappa(patterns: &[Vec<i8>], m: usize, n: usize) -> f64 {
    let size = patterns[m].len();
    let mut acc = 0i64;
    for (mu, p) in patterns.iter().enumerate() {
        if mu == m {
            continue;
        }
        let mut inner = 0i64;
        for j in 0..size {
            if j == n {
                continue;
            }
            inner += i64::from(p[j]) * i64::from(patterns[m][j]);
        }
        acc += i64::from(p[n]) * inner;
    }
    acc as f64 / size as f64
}

/// Expected crosstalk at site n of pattern m, conditioned on that site's
/// own chain: ((N-1)/N) * sum over mu != m of x_n^mu e(|mu - m|).
///
/// Averaging the triple sum over the other sites' chains turns each
/// inner product into (N-1) e(|mu - m|), leaving only the monitored
/// site's bits in the formula.
pub fn expected_crosstalk(
    stats: &ChainStatistics,
    patterns: &[Vec<i8>],
    m: usize,
    n: usize,
) -> f64 {
    let size = patterns[m].len() as f64;
    let mut acc = 0.0;
    for (mu, p) in patterns.iter().enumerate() {
        if mu == m {
            continue;
        }
        let sep = (mu as i64 - m as i64).unsigned_abs() as u32;
        acc += f64::from(p[n]) * stats.agreement(sep);
    }
    acc * (size - 1.0) / size
}

/// Per-pattern interference tracker fed one store at a time.
#[derive(Debug, Clone)]
pub struct CrosstalkMonitor {
    n: usize,
    stats: ChainStatistics,
    mode: WeightingMode,
    threshold: f64,
    /// chi columns for the estimating modes, one per stored pattern.
    columns: Vec<Vec<f64>>,
    /// N * chi columns for the exact mode, kept in integers so the
    /// threshold comparison is free of rounding.
    scaled: Vec<Vec<i64>>,
    /// Stored patterns, retained only in exact mode.
    retained: Vec<Vec<i8>>,
    stored: usize,
    peak: f64,
    flagged_at: Option<usize>,
}

impl CrosstalkMonitor {
    pub fn new(n: usize, stats: ChainStatistics, mode: WeightingMode) -> Result<Self> {
        Self::with_threshold(n, stats, mode, DESTRUCTIVE_THRESHOLD)
    }

    pub fn with_threshold(
        n: usize,
        stats: ChainStatistics,
        mode: WeightingMode,
        threshold: f64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "monitor needs at least 2 sites, got {n}"
            )));
        }
        if !threshold.is_finite() || threshold <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "threshold must be positive and finite, got {threshold}"
            )));
        }
        Ok(Self {
            n,
            stats,
            mode,
            threshold,
            columns: Vec::new(),
            scaled: Vec::new(),
            retained: Vec::new(),
            stored: 0,
            peak: 0.0,
            flagged_at: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> WeightingMode {
        self.mode
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn stats(&self) -> ChainStatistics {
        self.stats
    }

    /// Replace the chain statistics used to weight future stores.
    /// Columns already accumulated keep the weights they were built
    /// with, matching what a streaming estimator could actually have
    /// known at the time.
    pub fn set_stats(&mut self, stats: ChainStatistics) {
        self.stats = stats;
    }

    pub fn stored(&self) -> usize {
        self.stored
    }

    /// Store count at the first threshold crossing, if any.
    pub fn flagged_at(&self) -> Option<usize> {
        self.flagged_at
    }

    /// Record that `net` just absorbed pattern `x`.
    ///
    /// Must be called once per store, after the network applied it; the
    /// monitor rebuilds the pre-store activation from the post-store
    /// weights.
    pub fn record_store(&mut self, net: &Network, x: &[i8]) -> Result<()> {
        if net.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: net.n(),
            });
        }
        if net.stored() != self.stored + 1 {
            return Err(Error::StateMismatch(format!(
                "network holds {} patterns but the monitor has seen {}",
                net.stored(),
                self.stored
            )));
        }
        let a = net.weights().activation(x)?;
        // a is measured after the store, so strip the pattern's own
        // (N-1)/N signal contribution and scale to the integer grid
        let scaled: Vec<i64> = a
            .iter()
            .zip(x.iter())
            .map(|(&ai, &xi)| {
                let chi_scaled = (self.n as f64 - 1.0) - f64::from(xi) * ai * self.n as f64;
                chi_scaled.round() as i64
            })
            .collect();
        self.apply(x, &scaled)
    }

    /// Same as [`CrosstalkMonitor::record_store`] for callers that
    /// already track activations incrementally: `scaled_activation[i]`
    /// must equal N * (W x)_i measured after the store, an exact integer
    /// for Hebbian weights.
    pub fn record_store_scaled(&mut self, x: &[i8], scaled_activation: &[i64]) -> Result<()> {
        if x.len() != self.n || scaled_activation.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len().max(scaled_activation.len()),
            });
        }
        let scaled: Vec<i64> = scaled_activation
            .iter()
            .zip(x.iter())
            .map(|(&ta, &xi)| (self.n as i64 - 1) - i64::from(xi) * ta)
            .collect();
        self.apply(x, &scaled)
    }

    /// Fold one store into the column set. `scaled_col` is N times the
    /// new pattern's own interference column.
    fn apply(&mut self, x: &[i8], scaled_col: &[i64]) -> Result<()> {
        for (index, &value) in x.iter().enumerate() {
            if value != 1 && value != -1 {
                return Err(Error::NotBipolar { index, value });
            }
        }
        let arrival = self.stored + 1;
        match self.mode {
            WeightingMode::Expectation | WeightingMode::Raw => {
                let col: Vec<f64> = scaled_col
                    .iter()
                    .map(|&v| v as f64 / self.n as f64)
                    .collect();
                for (mu, old) in self.columns.iter_mut().enumerate() {
                    let sep = (arrival - (mu + 1)) as u32;
                    let w = match self.mode {
                        WeightingMode::Expectation => self.stats.agreement(sep),
                        WeightingMode::Raw => self.stats.rho(sep),
                        WeightingMode::Exact => unreachable!(),
                    };
                    for (slot, &delta) in old.iter_mut().zip(col.iter()) {
                        *slot += w * delta;
                    }
                }
                self.columns.push(col);
            }
            WeightingMode::Exact => {
                for (mu, old) in self.scaled.iter_mut().enumerate() {
                    let pattern = &self.retained[mu];
                    let d: i64 = x
                        .iter()
                        .zip(pattern.iter())
                        .map(|(&yi, &xi)| i64::from(yi) * i64::from(xi))
                        .sum();
                    for i in 0..self.n {
                        // exact increment of N * chi from one more store
                        old[i] += 1 - i64::from(pattern[i]) * i64::from(x[i]) * d;
                    }
                }
                self.scaled.push(scaled_col.to_vec());
                self.retained.push(x.to_vec());
            }
        }
        self.stored = arrival;
        let worst = self.current_worst();
        if worst > self.peak {
            self.peak = worst;
        }
        if self.flagged_at.is_none() && self.peak >= self.threshold {
            self.flagged_at = Some(arrival);
        }
        Ok(())
    }

    /// Largest entry of the current interference matrix.
    pub fn current_worst(&self) -> f64 {
        match self.mode {
            WeightingMode::Expectation | WeightingMode::Raw => self
                .columns
                .iter()
                .flat_map(|c| c.iter().copied())
                .fold(0.0f64, f64::max),
            WeightingMode::Exact => {
                let top = self
                    .scaled
                    .iter()
                    .flat_map(|c| c.iter().copied())
                    .max()
                    .unwrap_or(0)
                    .max(0);
                top as f64 / self.n as f64
            }
        }
    }

    /// The interference matrix as floating point columns, one per
    /// stored pattern.
    pub fn chi(&self) -> Vec<Vec<f64>> {
        match self.mode {
            WeightingMode::Expectation | WeightingMode::Raw => self.columns.clone(),
            WeightingMode::Exact => self
                .scaled
                .iter()
                .map(|col| col.iter().map(|&v| v as f64 / self.n as f64).collect())
                .collect(),
        }
    }

    /// Exact-mode integer columns, N * chi. None in the other modes.
    pub fn exact_scaled(&self) -> Option<&[Vec<i64>]> {
        match self.mode {
            WeightingMode::Exact => Some(&self.scaled),
            _ => None,
        }
    }

    /// Verdict over everything seen so far. The worst value is latched
    /// at its peak, so once the threshold is crossed the verdict stays
    /// over it even if later stores happen to cancel interference.
    pub fn verdict(&self) -> CapacityVerdict {
        CapacityVerdict {
            worst: self.peak,
            threshold: self.threshold,
            over: self.peak >= self.threshold,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn stats(b: f64, c: f64) -> ChainStatistics {
        ChainStatistics::from_params(b, c).unwrap()
    }

    fn random_pattern(n: usize, rng: &mut ChaCha8Rng) -> Vec<i8> {
        (0..n)
            .map(|_| if rng.random::<bool>() { 1 } else { -1 })
            .collect()
    }

    #[test]
    fn mode_names_round_trip() {
        for mode in [
            WeightingMode::Expectation,
            WeightingMode::Raw,
            WeightingMode::Exact,
        ] {
            assert_eq!(mode.to_string().parse::<WeightingMode>().unwrap(), mode);
        }
        assert!("EXACT".parse::<WeightingMode>().is_err());
    }

    #[test]
    fn empty_matrix_is_under_threshold() {
        let v = check_capacity(&[], 1.0);
        assert!(!v.over);
        assert_eq!(v.worst, 0.0);
    }

    #[test]
    fn record_requires_matching_store_count() {
        let mut net = Network::new(6).unwrap();
        let mut monitor = CrosstalkMonitor::new(6, stats(0.5, 0.0), WeightingMode::Exact).unwrap();
        let x = [1i8, -1, 1, 1, -1, 1];
        net.store(&x).unwrap();
        net.store(&x).unwrap();
        // monitor missed the first store
        assert!(matches!(
            monitor.record_store(&net, &x),
            Err(Error::StateMismatch(_))
        ));
    }

    #[test]
    fn both_record_paths_agree() {
        let n = 24;
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut net = Network::new(n).unwrap();
        let mut via_network =
            CrosstalkMonitor::new(n, stats(0.6, 0.25), WeightingMode::Expectation).unwrap();
        let mut via_scaled =
            CrosstalkMonitor::new(n, stats(0.6, 0.25), WeightingMode::Expectation).unwrap();
        for _ in 0..8 {
            let x = random_pattern(n, &mut rng);
            net.store(&x).unwrap();
            via_network.record_store(&net, &x).unwrap();
            let a = net.weights().activation(&x).unwrap();
            let ta: Vec<i64> = a.iter().map(|v| (v * n as f64).round() as i64).collect();
            via_scaled.record_store_scaled(&x, &ta).unwrap();
        }
        let lhs = via_network.chi();
        let rhs = via_scaled.chi();
        for (a, b) in lhs.iter().zip(rhs.iter()) {
            for (x, y) in a.iter().zip(b.iter()) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn verdict_latches_at_peak() {
        let n = 4;
        let mut monitor =
            CrosstalkMonitor::with_threshold(n, stats(0.5, 0.0), WeightingMode::Exact, 0.4)
                .unwrap();
        let mut net = Network::new(n).unwrap();
        let x = [1i8, 1, -1, -1];
        let y = [1i8, -1, 1, -1];
        net.store(&x).unwrap();
        monitor.record_store(&net, &x).unwrap();
        assert!(monitor.flagged_at().is_none());
        net.store(&y).unwrap();
        monitor.record_store(&net, &y).unwrap();
        // orthogonal pair on four sites: every chi entry is exactly 1/4,
        // under the crafted 0.4 threshold, so still quiet
        assert!(monitor.flagged_at().is_none());
        net.store(&x).unwrap();
        monitor.record_store(&net, &x).unwrap();
        let verdict = monitor.verdict();
        assert!(verdict.over);
        assert_eq!(monitor.flagged_at(), Some(3));
        // the flag may not move on later stores
        net.store(&y).unwrap();
        monitor.record_store(&net, &y).unwrap();
        assert_eq!(monitor.flagged_at(), Some(3));
        assert!(monitor.verdict().over);
    }

    #[test]
    fn expectation_mode_freezes_columns_for_independent_patterns() {
        let n = 16;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut net = Network::new(n).unwrap();
        let mut monitor =
            CrosstalkMonitor::new(n, stats(0.5, 0.0), WeightingMode::Expectation).unwrap();
        let mut first_column = None;
        for k in 0..6 {
            let x = random_pattern(n, &mut rng);
            net.store(&x).unwrap();
            monitor.record_store(&net, &x).unwrap();
            let chi = monitor.chi();
            match &first_column {
                None => first_column = Some(chi[0].clone()),
                Some(frozen) => {
                    for (a, b) in frozen.iter().zip(chi[0].iter()) {
                        assert!((a - b).abs() < 1e-12, "column moved at store {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn raw_mode_inflates_faster_than_expectation() {
        let n = 32;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut net = Network::new(n).unwrap();
        let s = stats(0.5, 0.0);
        let mut exp = CrosstalkMonitor::new(n, s, WeightingMode::Expectation).unwrap();
        let mut raw = CrosstalkMonitor::new(n, s, WeightingMode::Raw).unwrap();
        for _ in 0..12 {
            let x = random_pattern(n, &mut rng);
            net.store(&x).unwrap();
            exp.record_store(&net, &x).unwrap();
            raw.record_store(&net, &x).unwrap();
        }
        // raw weights keep adding half of every arrival column into the
        // old columns; with a dozen stores the worst entry has to lead
        assert!(raw.verdict().worst > exp.verdict().worst);
    }
}
