use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::baselines::{
    gamma_bias, gamma_corr, lowe_capacity, mceliece_capacity, BaselineModel, StaticEstimate,
};
use crate::crosstalk::{CrosstalkMonitor, WeightingMode};
use crate::error::{Error, Result};
use crate::harness::config::{RecallSemantics, TrialConfig, BIAS_RANGE, CORR_RANGE};
use crate::hopfield::Network;
use crate::markov::ChainStatistics;
use crate::pattern::PatternStream;

/// Correlated-regime denominators below this value are lifted to it
/// before dividing, keeping the static figure from exploding where the
/// curve vanishes.
pub(crate) const GAMMA_FLOOR: f64 = 4.0;

/// Online correlation estimates are capped just under a frozen chain so
/// they always describe a chain with a stationary distribution.
const ONLINE_CORR_CAP: f64 = 0.99;

/// Store counts at which each monitor mode first flagged.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModeEstimates {
    pub expectation: usize,
    pub raw: usize,
    pub exact: usize,
}

impl ModeEstimates {
    pub fn get(&self, mode: WeightingMode) -> usize {
        match mode {
            WeightingMode::Expectation => self.expectation,
            WeightingMode::Raw => self.raw,
            WeightingMode::Exact => self.exact,
        }
    }
}

/// Worst interference after each store, one series per monitor mode.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ModeTraces {
    pub expectation: Vec<f64>,
    pub raw: Vec<f64>,
    pub exact: Vec<f64>,
}

/// One capacity model's stopping decision evaluated against the truth.
#[derive(Debug, Clone, Serialize)]
pub struct ModelOutcome {
    pub model: String,
    /// Pattern count the model would stop at.
    pub estimate: usize,
    /// estimate / true capacity.
    pub accuracy: f64,
    /// Patterns per weight at the stop, zeroed when the model overshot
    /// the true capacity and nothing stored was recallable there.
    pub efficiency: f64,
    /// Stored patterns still recallable at the stop load.
    pub recalled_at_stop: usize,
}

/// Everything observed in one trial.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub n: usize,
    pub drawn_bias: f64,
    pub drawn_correlation: f64,
    pub measured_bias: f64,
    pub measured_correlation: f64,
    pub pattern_seed: u64,
    /// Patterns held without any recall failure; the count stored just
    /// before the first store that broke one.
    pub true_capacity: usize,
    /// The pattern cap cut the trial short before every model resolved.
    pub censored: bool,
    pub estimates: ModeEstimates,
    pub statics: Vec<StaticEstimate>,
    pub models: Vec<ModelOutcome>,
    /// Headline-mode flag came at or before the first failing store.
    pub flagged_before_loss: bool,
    /// Headline-mode flag came while every stored pattern was intact.
    pub preserved_all: bool,
    pub traces: ModeTraces,
}

/// Incremental integer activation state: row p holds N * (W x^p) for
/// every stored pattern p, updated in O(N) per pattern per store.
struct ActivationTracker {
    n: usize,
    patterns: Vec<Vec<i8>>,
    scaled: Vec<Vec<i64>>,
}

impl ActivationTracker {
    fn new(n: usize) -> Self {
        Self {
            n,
            patterns: Vec::new(),
            scaled: Vec::new(),
        }
    }

    /// Absorb one store and return N * (W y) for the new pattern, with
    /// W measured after the store.
    fn store(&mut self, y: &[i8]) -> Vec<i64> {
        let n = self.n;
        let mut fresh = vec![0i64; n];
        for (xp, ta) in self.patterns.iter().zip(self.scaled.iter_mut()) {
            let d: i64 = y
                .iter()
                .zip(xp.iter())
                .map(|(&a, &b)| i64::from(a) * i64::from(b))
                .sum();
            for i in 0..n {
                ta[i] += i64::from(y[i]) * d - i64::from(xp[i]);
                fresh[i] += i64::from(xp[i]) * d;
            }
        }
        let older = self.patterns.len() as i64;
        for i in 0..n {
            fresh[i] += i64::from(y[i]) * (n as i64 - 1 - older);
        }
        self.patterns.push(y.to_vec());
        self.scaled.push(fresh.clone());
        fresh
    }

    /// Count stored patterns that are fixed points right now. A site
    /// with zero activation keeps its bit, so only a strict sign
    /// disagreement breaks a pattern.
    fn fixed_point_count(&self) -> usize {
        self.patterns
            .iter()
            .zip(self.scaled.iter())
            .filter(|(xp, ta)| {
                xp.iter()
                    .zip(ta.iter())
                    .all(|(&x, &a)| i64::from(x) * a >= 0)
            })
            .count()
    }
}

/// Running parameter estimates from the pattern prefix seen so far,
/// algebraically identical to measuring the whole prefix at once.
struct OnlineStats {
    plus: u64,
    total: u64,
    agree: i64,
    pairs: u64,
    previous: Option<Vec<i8>>,
}

impl OnlineStats {
    fn new() -> Self {
        Self {
            plus: 0,
            total: 0,
            agree: 0,
            pairs: 0,
            previous: None,
        }
    }

    fn ingest(&mut self, y: &[i8]) {
        self.plus += y.iter().filter(|&&b| b > 0).count() as u64;
        self.total += y.len() as u64;
        if let Some(prev) = &self.previous {
            for (a, b) in prev.iter().zip(y.iter()) {
                self.agree += i64::from(*a) * i64::from(*b);
            }
            self.pairs += y.len() as u64;
        }
        self.previous = Some(y.to_vec());
    }

    fn bias(&self) -> f64 {
        if self.total == 0 {
            0.5
        } else {
            self.plus as f64 / self.total as f64
        }
    }

    /// Correlation by the same inversion as offline measurement, capped
    /// below a frozen chain.
    fn correlation(&self) -> f64 {
        if self.pairs == 0 {
            return 0.0;
        }
        let e1 = self.agree as f64 / self.pairs as f64;
        let m = 2.0 * self.bias() - 1.0;
        let denom = 1.0 - m * m;
        if denom <= f64::EPSILON {
            return 1.0;
        }
        ((e1 - m * m) / denom).clamp(0.0, 1.0)
    }

    fn chain(&self) -> Result<ChainStatistics> {
        ChainStatistics::from_params(self.bias(), self.correlation().min(ONLINE_CORR_CAP))
    }
}

/// The three closed-form baselines sized from the suite's worst-case
/// parameters, in reporting order.
pub(crate) fn static_estimates(cfg: &TrialConfig) -> Result<Vec<StaticEstimate>> {
    let (b_wc, c_wc) = cfg.worst_case_params();
    Ok(vec![
        mceliece_capacity(cfg.n, 0.0)?,
        lowe_capacity(cfg.n, gamma_bias(b_wc), BaselineModel::LoweBias)?,
        lowe_capacity(
            cfg.n,
            gamma_corr(c_wc).max(GAMMA_FLOOR),
            BaselineModel::LoweCorr,
        )?,
    ])
}

/// Which baseline a cautious deployment would size from: the
/// correlated-regime curve when any correlation is expected, the biased
/// curve when only bias is, and the classical bound otherwise.
pub(crate) fn static_choice(cfg: &TrialConfig) -> BaselineModel {
    let (b_wc, c_wc) = cfg.worst_case_params();
    if c_wc > 0.0 {
        BaselineModel::LoweCorr
    } else if b_wc > BIAS_RANGE.0 {
        BaselineModel::LoweBias
    } else {
        BaselineModel::McEliece
    }
}

/// Run one trial: draw chain parameters from the configured normals,
/// stream patterns into a network while three monitors and the exact
/// stability state watch, and score every stopping model afterwards.
pub fn run_trial(cfg: &TrialConfig, index: usize) -> Result<TrialRecord> {
    cfg.validate()?;
    let n = cfg.n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);

    let bias_normal = Normal::new(cfg.bias_mean, cfg.bias_std)
        .map_err(|e| Error::InvalidArgument(format!("bias draw: {e}")))?;
    let corr_normal = Normal::new(cfg.corr_mean, cfg.corr_std)
        .map_err(|e| Error::InvalidArgument(format!("correlation draw: {e}")))?;
    let bias = bias_normal
        .sample(&mut rng)
        .clamp(BIAS_RANGE.0, BIAS_RANGE.1);
    let corr = corr_normal
        .sample(&mut rng)
        .clamp(CORR_RANGE.0, CORR_RANGE.1);
    let pattern_seed: u64 = rng.random();

    let stats = ChainStatistics::from_params(bias, corr)?;
    let mut stream = PatternStream::new(n, stats, pattern_seed)?;
    let cap = cfg.effective_max_patterns();

    let monitor_stats = if cfg.online_stats {
        ChainStatistics::from_params(0.5, 0.0)?
    } else {
        stats
    };
    let mut expectation = CrosstalkMonitor::new(n, monitor_stats, WeightingMode::Expectation)?;
    let mut raw = CrosstalkMonitor::new(n, monitor_stats, WeightingMode::Raw)?;
    let mut exact = CrosstalkMonitor::new(n, monitor_stats, WeightingMode::Exact)?;

    let statics = static_estimates(cfg)?;
    let floors_needed = statics
        .iter()
        .map(StaticEstimate::floor)
        .max()
        .unwrap_or(0)
        .min(cap);

    let mut tracker = ActivationTracker::new(n);
    let mut online = OnlineStats::new();
    let mut traces = ModeTraces::default();
    let mut fixed_counts: Vec<usize> = Vec::with_capacity(cap.min(4096));
    let mut first_fail: Option<usize> = None;

    let mut stored = 0usize;
    while stored < cap {
        let y = stream.next_pattern();
        stored += 1;
        online.ingest(&y);
        if cfg.online_stats {
            let est = online.chain()?;
            expectation.set_stats(est);
            raw.set_stats(est);
            exact.set_stats(est);
        }
        let fresh = tracker.store(&y);
        expectation.record_store_scaled(&y, &fresh)?;
        raw.record_store_scaled(&y, &fresh)?;
        exact.record_store_scaled(&y, &fresh)?;
        traces.expectation.push(expectation.current_worst());
        traces.raw.push(raw.current_worst());
        traces.exact.push(exact.current_worst());

        let fixed = tracker.fixed_point_count();
        fixed_counts.push(fixed);
        if first_fail.is_none() && fixed < stored {
            first_fail = Some(stored);
        }

        let flags_done = expectation.flagged_at().is_some()
            && raw.flagged_at().is_some()
            && exact.flagged_at().is_some();
        if first_fail.is_some() && flags_done && stored >= floors_needed {
            break;
        }
    }

    let last = stored;
    let censored = first_fail.is_none()
        || expectation.flagged_at().is_none()
        || raw.flagged_at().is_none()
        || exact.flagged_at().is_none();
    let true_capacity = first_fail.map(|k| k - 1).unwrap_or(last);
    let estimates = ModeEstimates {
        expectation: expectation.flagged_at().unwrap_or(last),
        raw: raw.flagged_at().unwrap_or(last),
        exact: exact.flagged_at().unwrap_or(last),
    };

    let n_sq = (n * n) as f64;
    let score = |name: &str, stop: usize| -> ModelOutcome {
        let eval = stop.min(last);
        let recalled = if eval == 0 { 0 } else { fixed_counts[eval - 1] };
        let overshoot_wasted = stop > true_capacity && recalled == 0;
        ModelOutcome {
            model: name.to_string(),
            estimate: stop,
            accuracy: stop as f64 / true_capacity as f64,
            efficiency: if overshoot_wasted || stop == 0 {
                0.0
            } else {
                stop as f64 / n_sq
            },
            recalled_at_stop: recalled,
        }
    };

    let mut models = vec![
        score("dynamic", estimates.get(cfg.weighting)),
        score("dynamic-expectation", estimates.expectation),
        score("dynamic-raw", estimates.raw),
        score("dynamic-exact", estimates.exact),
    ];
    for est in &statics {
        models.push(score(&est.model.to_string(), est.floor()));
    }
    models.push(score("maximum", true_capacity));

    let headline = estimates.get(cfg.weighting);
    Ok(TrialRecord {
        trial: index,
        n,
        drawn_bias: bias,
        drawn_correlation: corr,
        measured_bias: online.bias(),
        measured_correlation: online.correlation(),
        pattern_seed,
        true_capacity,
        censored,
        estimates,
        statics,
        models,
        flagged_before_loss: headline <= true_capacity + 1,
        preserved_all: headline <= true_capacity,
        traces,
    })
}

/// Independent slow-path capacity: rebuild the network store by store
/// and probe every held pattern through the public recall interface.
/// Returns the count held just before the first failure, or an error if
/// every provided pattern fits.
pub fn true_capacity(patterns: &[Vec<i8>], recall: RecallSemantics) -> Result<usize> {
    if patterns.is_empty() {
        return Err(Error::InvalidArgument(
            "capacity probe needs at least one pattern".into(),
        ));
    }
    let n = patterns[0].len();
    let mut net = Network::new(n)?;
    for (k, p) in patterns.iter().enumerate() {
        net.store(p)?;
        for held in &patterns[..=k] {
            let recalled = match recall {
                RecallSemantics::FixedPoint => net.is_fixed_point(held)?,
                RecallSemantics::Relax { max_sweeps } => {
                    let out = net.recall_relax(held, max_sweeps)?;
                    out.converged && out.state == *held
                }
            };
            if !recalled {
                return Ok(k);
            }
        }
    }
    Err(Error::CapacityExceeded {
        stored: patterns.len(),
    })
}
