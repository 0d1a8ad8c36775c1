use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::markov::ChainStatistics;
use crate::pattern::PatternSet;

/// One grid point of the generator check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridCell {
    pub bias: f64,
    pub correlation: f64,
    pub measured_bias: f64,
    pub measured_correlation: f64,
    pub bias_error: f64,
    pub corr_error: f64,
    /// Corner of parameter space where finite-sample estimates are
    /// known to wander: strong bias or strong correlation.
    pub deviation_prone: bool,
}

/// Measured generator behaviour over the whole parameter grid.
#[derive(Debug, Clone, Serialize)]
pub struct GridReport {
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub cells: Vec<GridCell>,
}

impl GridReport {
    /// Largest absolute error over the unflagged part of the grid.
    pub fn worst_clean_error(&self) -> f64 {
        self.cells
            .iter()
            .filter(|c| !c.deviation_prone)
            .map(|c| c.bias_error.max(c.corr_error))
            .fold(0.0, f64::max)
    }
}

/// Sweep bias over 0.50..=0.95 in steps of 0.05 and correlation over
/// 0.0..=0.9 in steps of 0.1, generate `count` patterns of `n` bits at
/// every point, and measure the realised parameters back.
pub fn verify_generator(n: usize, count: usize, seed: u64) -> Result<GridReport> {
    let mut cells = Vec::with_capacity(100);
    let mut index = 0u64;
    for bi in 0..10 {
        let bias = 0.50 + 0.05 * bi as f64;
        for ci in 0..10 {
            let correlation = 0.1 * ci as f64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index);
            index += 1;
            let pattern_seed: u64 = rng.random();
            let stats = ChainStatistics::from_params(bias, correlation)?;
            let set = PatternSet::generate(n, count, stats, pattern_seed)?;
            let measured_bias = set.measured_bias();
            let measured_correlation = set.measured_correlation();
            cells.push(GridCell {
                bias,
                correlation,
                measured_bias,
                measured_correlation,
                bias_error: (measured_bias - bias).abs(),
                corr_error: (measured_correlation - correlation).abs(),
                deviation_prone: bias > 0.7 || correlation > 0.5,
            });
        }
    }
    Ok(GridReport {
        n,
        count,
        seed,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_covers_the_full_rectangle() {
        let report = verify_generator(50, 30, 1).unwrap();
        assert_eq!(report.cells.len(), 100);
        let first = &report.cells[0];
        assert_eq!(first.bias, 0.5);
        assert_eq!(first.correlation, 0.0);
        let last = report.cells.last().unwrap();
        assert_eq!(last.bias, 0.95);
        assert!((last.correlation - 0.9).abs() < 1e-12);
    }

    #[test]
    fn flags_mark_the_difficult_corner() {
        let report = verify_generator(50, 30, 2).unwrap();
        for cell in &report.cells {
            assert_eq!(
                cell.deviation_prone,
                cell.bias > 0.7 || cell.correlation > 0.5
            );
        }
    }

    #[test]
    fn errors_shrink_with_sample_size() {
        let rough = verify_generator(100, 30, 5).unwrap();
        let fine = verify_generator(400, 300, 5).unwrap();
        // compare total error over the well-behaved region
        let sum = |r: &GridReport| {
            r.cells
                .iter()
                .filter(|c| !c.deviation_prone)
                .map(|c| c.bias_error + c.corr_error)
                .sum::<f64>()
        };
        assert!(sum(&fine) < sum(&rough));
    }

    #[test]
    fn report_is_reproducible() {
        let a = verify_generator(80, 50, 12).unwrap();
        let b = verify_generator(80, 50, 12).unwrap();
        for (x, y) in a.cells.iter().zip(b.cells.iter()) {
            assert_eq!(x.measured_bias, y.measured_bias);
            assert_eq!(x.measured_correlation, y.measured_correlation);
        }
    }
}
