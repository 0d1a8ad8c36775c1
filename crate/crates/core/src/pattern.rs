//! Generation and measurement of +1/-1 pattern sequences.
//!
//! Each neuron carries its own two-state chain, run down the pattern
//! index: bit i of pattern mu depends only on bit i of pattern mu - 1.
//! Consecutive patterns therefore agree on a fraction of sites governed
//! by the chain's one-step agreement, while sites are independent of one
//! another.
//!
//! Randomness is organised so the sequence is reproducible regardless of
//! how it is consumed: pattern mu always comes from stream mu of the
//! seeded generator, so pulling fifty patterns in one call or in three
//! produces identical bits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::markov::ChainStatistics;

/// A finished batch of patterns together with the parameters that
/// produced it.
#[derive(Debug, Clone)]
pub struct PatternSet {
    n: usize,
    stats: ChainStatistics,
    seed: u64,
    patterns: Vec<Vec<i8>>,
}

impl PatternSet {
    /// Generate `count` patterns of `n` bits in one go.
    pub fn generate(n: usize, count: usize, stats: ChainStatistics, seed: u64) -> Result<Self> {
        let mut stream = PatternStream::new(n, stats, seed)?;
        let patterns = stream.take(count);
        Ok(Self {
            n,
            stats,
            seed,
            patterns,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stats(&self) -> ChainStatistics {
        self.stats
    }

    pub fn patterns(&self) -> &[Vec<i8>] {
        &self.patterns
    }

    /// Fraction of +1 bits over the whole set.
    pub fn measured_bias(&self) -> f64 {
        measure_bias(&self.patterns)
    }

    /// Correlation recovered from the one-step agreement.
    pub fn measured_correlation(&self) -> f64 {
        measure_correlation(&self.patterns)
    }
}

/// Incremental pattern source. `take` may be called repeatedly; the
/// concatenation of the chunks equals a single larger request.
#[derive(Debug, Clone)]
pub struct PatternStream {
    n: usize,
    stats: ChainStatistics,
    seed: u64,
    next_index: u64,
    previous: Option<Vec<i8>>,
}

impl PatternStream {
    pub fn new(n: usize, stats: ChainStatistics, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "pattern size must be positive".into(),
            ));
        }
        Ok(Self {
            n,
            stats,
            seed,
            next_index: 0,
            previous: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of patterns produced so far.
    pub fn produced(&self) -> u64 {
        self.next_index
    }

    /// Draw the next pattern in the sequence.
    pub fn next_pattern(&mut self) -> Vec<i8> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.next_index);
        let pattern: Vec<i8> = match &self.previous {
            None => (0..self.n)
                .map(|_| draw(&mut rng, self.stats.bias))
                .collect(),
            Some(prev) => prev
                .iter()
                .map(|&bit| {
                    let p_plus = if bit > 0 {
                        1.0 - self.stats.alpha
                    } else {
                        self.stats.beta
                    };
                    draw(&mut rng, p_plus)
                })
                .collect(),
        };
        self.next_index += 1;
        self.previous = Some(pattern.clone());
        pattern
    }

    /// Draw `count` patterns.
    pub fn take(&mut self, count: usize) -> Vec<Vec<i8>> {
        (0..count).map(|_| self.next_pattern()).collect()
    }
}

fn draw(rng: &mut ChaCha8Rng, p_plus: f64) -> i8 {
    if rng.random::<f64>() < p_plus {
        1
    } else {
        -1
    }
}

/// Fraction of +1 bits across the whole set. An empty set reads as 0.5,
/// the uninformative value.
pub fn measure_bias(patterns: &[Vec<i8>]) -> f64 {
    let total: usize = patterns.iter().map(Vec::len).sum();
    if total == 0 {
        return 0.5;
    }
    let plus: usize = patterns
        .iter()
        .flat_map(|p| p.iter())
        .filter(|&&b| b > 0)
        .count();
    plus as f64 / total as f64
}

/// Invert the measured one-step agreement into a correlation estimate.
///
/// With m_hat = 2 b_hat - 1 and e_hat the mean product of vertically
/// adjacent bits, the chain model gives e(1) = m^2 + (1 - m^2) c, so
///
/// ```text
/// c_hat = (e_hat - m_hat^2) / (1 - m_hat^2)
/// ```
///
/// clamped into [0, 1]. A set whose bits are all equal makes the
/// denominator vanish; such a set is indistinguishable from a fully
/// frozen chain, so the estimate is 1. Fewer than two patterns carry no
/// pairing information and read as 0.
pub fn measure_correlation(patterns: &[Vec<i8>]) -> f64 {
    if patterns.len() < 2 {
        return 0.0;
    }
    let mut agree_sum = 0i64;
    let mut pairs = 0i64;
    for window in patterns.windows(2) {
        for (a, b) in window[0].iter().zip(window[1].iter()) {
            agree_sum += i64::from(*a) * i64::from(*b);
            pairs += 1;
        }
    }
    if pairs == 0 {
        return 0.0;
    }
    let e1 = agree_sum as f64 / pairs as f64;
    let m = 2.0 * measure_bias(patterns) - 1.0;
    let denom = 1.0 - m * m;
    if denom <= f64::EPSILON {
        return 1.0;
    }
    ((e1 - m * m) / denom).clamp(0.0, 1.0)
}
