//! Randomized structural properties of the storage rule, the recall
//! map and the interference monitor.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hopcap_core::crosstalk::{new_column, CrosstalkMonitor, WeightingMode};
use hopcap_core::hopfield::Network;
use hopcap_core::markov::ChainStatistics;
use hopcap_core::pattern::{measure_bias, measure_correlation, PatternSet};

fn pattern_set(n: usize, count: usize, b: f64, c: f64, seed: u64) -> Vec<Vec<i8>> {
    let stats = ChainStatistics::from_params(b, c).expect("strategy stays in range");
    PatternSet::generate(n, count, stats, seed)
        .expect("generation cannot fail for positive n")
        .patterns()
        .to_vec()
}

/// The definitional triple sum, reimplemented here so monitor checks do
/// not depend on the library's own crosstalk code.
fn naive_kappa(patterns: &[Vec<i8>], m: usize, site: usize) -> f64 {
    let n = patterns[m].len();
    let mut acc = 0i64;
    for (mu, p) in patterns.iter().enumerate() {
        if mu == m {
            continue;
        }
        for j in 0..n {
            if j != site {
                acc += i64::from(p[site]) * i64::from(p[j]) * i64::from(patterns[m][j]);
            }
        }
    }
    acc as f64 / n as f64
}

fn params() -> impl Strategy<Value = (usize, usize, f64, f64, u64)> {
    (
        4usize..=32,
        1usize..=12,
        0.5f64..=0.9,
        0.0f64..=0.6,
        any::<u64>(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_entries_are_bipolar((n, count, b, c, seed) in params()) {
        for p in pattern_set(n, count, b, c, seed) {
            prop_assert_eq!(p.len(), n);
            prop_assert!(p.iter().all(|&v| v == 1 || v == -1));
        }
    }

    #[test]
    fn weights_stay_symmetric_with_zero_diagonal((n, count, b, c, seed) in params()) {
        let mut net = Network::new(n).unwrap();
        for p in pattern_set(n, count, b, c, seed) {
            net.store(&p).unwrap();
        }
        let w = net.weights();
        for i in 0..n {
            prop_assert_eq!(w.get(i, i), 0.0);
            for j in 0..i {
                prop_assert_eq!(w.get(i, j), w.get(j, i));
            }
        }
    }

    #[test]
    fn store_order_does_not_matter((n, count, b, c, seed) in params()) {
        let patterns = pattern_set(n, count, b, c, seed);
        let mut forward = Network::new(n).unwrap();
        for p in &patterns {
            forward.store(p).unwrap();
        }
        let mut shuffled = patterns.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        shuffled.shuffle(&mut rng);
        let mut permuted = Network::new(n).unwrap();
        for p in &shuffled {
            permuted.store(p).unwrap();
        }
        for i in 0..n {
            for j in 0..n {
                let delta = (forward.weights().get(i, j) - permuted.weights().get(i, j)).abs();
                prop_assert!(delta <= 1e-12, "w[{}][{}] differs by {}", i, j, delta);
            }
        }
    }

    #[test]
    fn negating_a_pattern_stores_the_same_weights((n, count, b, c, seed) in params()) {
        let patterns = pattern_set(n, count, b, c, seed);
        let mut plain = Network::new(n).unwrap();
        let mut negated = Network::new(n).unwrap();
        for (k, p) in patterns.iter().enumerate() {
            plain.store(p).unwrap();
            if k == 0 {
                let flipped: Vec<i8> = p.iter().map(|&v| -v).collect();
                negated.store(&flipped).unwrap();
            } else {
                negated.store(p).unwrap();
            }
        }
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(plain.weights().get(i, j), negated.weights().get(i, j));
            }
        }
    }

    #[test]
    fn activation_matches_naive_product((n, count, b, c, seed) in params()) {
        let patterns = pattern_set(n, count.max(1), b, c, seed);
        let mut net = Network::new(n).unwrap();
        for p in &patterns {
            net.store(p).unwrap();
        }
        let probe = &patterns[0];
        let a = net.weights().activation(probe).unwrap();
        for (i, &got) in a.iter().enumerate() {
            let direct: f64 = probe
                .iter()
                .enumerate()
                .map(|(j, &v)| net.weights().get(i, j) * f64::from(v))
                .sum();
            prop_assert!((got - direct).abs() <= 1e-12);
        }
    }

    #[test]
    fn one_step_output_is_bipolar_and_fixed_points_stay((n, count, b, c, seed) in params()) {
        let patterns = pattern_set(n, count.max(1), b, c, seed);
        let mut net = Network::new(n).unwrap();
        for p in &patterns {
            net.store(p).unwrap();
        }
        let out = net.recall_one_step(&patterns[0]).unwrap();
        prop_assert!(out.iter().all(|&v| v == 1 || v == -1));
        if out == patterns[0] {
            // a fixed point must stay fixed under iteration
            let again = net.recall_one_step(&out).unwrap();
            prop_assert_eq!(again, out);
        }
    }

    #[test]
    fn appended_column_is_exact_in_every_mode((n, count, b, c, seed) in params()) {
        let patterns = pattern_set(n, count, b, c, seed);
        for mode in [WeightingMode::Expectation, WeightingMode::Raw, WeightingMode::Exact] {
            let stats = ChainStatistics::from_params(b, c).unwrap();
            let mut net = Network::new(n).unwrap();
            let mut monitor = CrosstalkMonitor::new(n, stats, mode).unwrap();
            for p in &patterns {
                let before = net.weights().clone();
                let expected = new_column(&before, p).unwrap();
                net.store(p).unwrap();
                monitor.record_store(&net, p).unwrap();
                let chi = monitor.chi();
                let appended = chi.last().unwrap();
                for (got, want) in appended.iter().zip(expected.iter()) {
                    prop_assert!((got - want).abs() <= 1e-12,
                        "mode {} column off by {}", mode, (got - want).abs());
                }
            }
        }
    }

    #[test]
    fn exact_increments_conserve_the_new_column((n, count, b, c, seed) in params()) {
        let stats = ChainStatistics::from_params(b, c).unwrap();
        let patterns = pattern_set(n, count, b, c, seed);
        let mut net = Network::new(n).unwrap();
        let mut monitor = CrosstalkMonitor::new(n, stats, WeightingMode::Exact).unwrap();
        let mut previous = monitor.chi();
        for p in &patterns {
            net.store(p).unwrap();
            monitor.record_store(&net, p).unwrap();
            let current = monitor.chi();
            let fresh = current.last().unwrap();
            if !previous.is_empty() {
                for site in 0..n {
                    let distributed: f64 = previous
                        .iter()
                        .zip(current.iter())
                        .map(|(old, new)| new[site] - old[site])
                        .sum();
                    prop_assert!((distributed - fresh[site]).abs() <= 1e-9,
                        "site {} distributed {} vs fresh {}", site, distributed, fresh[site]);
                }
            }
            previous = current;
        }
    }

    #[test]
    fn exact_mode_matches_the_triple_sum((n, count, b, c, seed) in params()) {
        let stats = ChainStatistics::from_params(b, c).unwrap();
        let patterns = pattern_set(n, count, b, c, seed);
        let mut net = Network::new(n).unwrap();
        let mut monitor = CrosstalkMonitor::new(n, stats, WeightingMode::Exact).unwrap();
        for p in &patterns {
            net.store(p).unwrap();
            monitor.record_store(&net, p).unwrap();
        }
        let chi = monitor.chi();
        for (m, col) in chi.iter().enumerate() {
            for site in 0..n {
                let expected = -f64::from(patterns[m][site]) * naive_kappa(&patterns, m, site);
                prop_assert!((col[site] - expected).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn interference_at_one_is_exactly_lost_stability((n, count, b, c, seed) in params()) {
        let stats = ChainStatistics::from_params(b, c).unwrap();
        let patterns = pattern_set(n, count, b, c, seed);
        let mut net = Network::new(n).unwrap();
        let mut monitor = CrosstalkMonitor::new(n, stats, WeightingMode::Exact).unwrap();
        for p in &patterns {
            net.store(p).unwrap();
            monitor.record_store(&net, p).unwrap();
        }
        let scaled = monitor.exact_scaled().unwrap();
        let mut any_broken = false;
        for (m, col) in scaled.iter().enumerate() {
            let one_step = net.recall_one_step(&patterns[m]).unwrap();
            for site in 0..n {
                let site_holds = one_step[site] == patterns[m][site];
                // chi < 1 keeps the site, chi exactly (N-1)/N is the tie
                // that also keeps it, chi >= 1 flips it
                prop_assert_eq!(site_holds, col[site] < n as i64,
                    "pattern {} site {} scaled {}", m, site, col[site]);
                if !site_holds {
                    any_broken = true;
                }
            }
        }
        prop_assert_eq!(monitor.current_worst() >= 1.0, any_broken);
    }

    #[test]
    fn flag_is_monotone_and_marks_first_crossing((n, count, b, c, seed) in params()) {
        let stats = ChainStatistics::from_params(b, c).unwrap();
        let patterns = pattern_set(n, count, b, c, seed);
        let mut net = Network::new(n).unwrap();
        let mut monitor = CrosstalkMonitor::new(n, stats, WeightingMode::Raw).unwrap();
        let mut seen_over = false;
        let mut first_over = None;
        for (k, p) in patterns.iter().enumerate() {
            net.store(p).unwrap();
            monitor.record_store(&net, p).unwrap();
            let over = monitor.verdict().over;
            prop_assert!(!(seen_over && !over), "verdict fell back under threshold");
            if over && first_over.is_none() {
                first_over = Some(k + 1);
            }
            seen_over = over;
        }
        prop_assert_eq!(monitor.flagged_at(), first_over);
    }

    #[test]
    fn measured_statistics_stay_in_range((n, count, b, c, seed) in params()) {
        let patterns = pattern_set(n, count, b, c, seed);
        let bias = measure_bias(&patterns);
        prop_assert!((0.0..=1.0).contains(&bias));
        let corr = measure_correlation(&patterns);
        prop_assert!((0.0..=1.0).contains(&corr));
    }
}
