use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::crosstalk::WeightingMode;
use crate::error::{Error, Result};

/// Interval trial biases are clamped into after the normal draw.
pub const BIAS_RANGE: (f64, f64) = (0.5, 0.95);
/// Interval trial correlations are clamped into after the normal draw.
pub const CORR_RANGE: (f64, f64) = (0.0, 0.9);
/// Sweep budget when relaxation recall is chosen without one.
pub const DEFAULT_RELAX_SWEEPS: usize = 50;

/// What counts as a successful recall of a stored pattern.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RecallSemantics {
    /// The pattern must map to itself in one synchronous step.
    #[default]
    FixedPoint,
    /// Relaxation from the pattern must settle back on it within the
    /// sweep budget.
    Relax { max_sweeps: usize },
}

impl fmt::Display for RecallSemantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecallSemantics::FixedPoint => f.write_str("fixed-point"),
            RecallSemantics::Relax { .. } => f.write_str("relax"),
        }
    }
}

impl FromStr for RecallSemantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed-point" => Ok(RecallSemantics::FixedPoint),
            "relax" => Ok(RecallSemantics::Relax {
                max_sweeps: DEFAULT_RELAX_SWEEPS,
            }),
            other => Err(Error::InvalidArgument(format!(
                "unknown recall semantics '{other}', expected fixed-point or relax"
            ))),
        }
    }
}

/// Parameters shared by every trial of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    /// Network size.
    pub n: usize,
    /// Mean of the per-trial bias draw.
    pub bias_mean: f64,
    /// Standard deviation of the per-trial bias draw.
    pub bias_std: f64,
    /// Mean of the per-trial correlation draw.
    pub corr_mean: f64,
    /// Standard deviation of the per-trial correlation draw.
    pub corr_std: f64,
    /// Master seed; trial i derives its randomness from stream i.
    pub seed: u64,
    /// Which monitor mode supplies the headline dynamic estimate.
    pub weighting: WeightingMode,
    /// Recall success definition.
    pub recall: RecallSemantics,
    /// Hard cap on stored patterns; `None` picks max(32, n / 2).
    pub max_patterns: Option<usize>,
    /// Feed the monitors running parameter estimates instead of the
    /// true drawn chain parameters.
    pub online_stats: bool,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            n: 500,
            bias_mean: 0.5,
            bias_std: 0.0,
            corr_mean: 0.0,
            corr_std: 0.0,
            seed: 42,
            weighting: WeightingMode::Expectation,
            recall: RecallSemantics::FixedPoint,
            max_patterns: None,
            online_stats: false,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidArgument(format!(
                "network size must be at least 2, got {}",
                self.n
            )));
        }
        for (name, value) in [
            ("bias_mean", self.bias_mean),
            ("bias_std", self.bias_std),
            ("corr_mean", self.corr_mean),
            ("corr_std", self.corr_std),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite")));
            }
        }
        if self.bias_std < 0.0 || self.corr_std < 0.0 {
            return Err(Error::InvalidArgument(
                "standard deviations must be nonnegative".into(),
            ));
        }
        if let Some(cap) = self.max_patterns {
            if cap == 0 {
                return Err(Error::InvalidArgument(
                    "max_patterns must be positive when given".into(),
                ));
            }
        }
        if let RecallSemantics::Relax { max_sweeps } = self.recall {
            if max_sweeps == 0 {
                return Err(Error::InvalidArgument(
                    "relax recall needs at least one sweep".into(),
                ));
            }
        }
        Ok(())
    }

    /// The pattern cap actually used by a trial.
    pub fn effective_max_patterns(&self) -> usize {
        self.max_patterns.unwrap_or_else(|| 32.max(self.n / 2))
    }

    /// Parameters a cautious static sizing would assume: the configured
    /// mean plus three standard deviations, clamped to the same range
    /// the trials draw from.
    pub fn worst_case_params(&self) -> (f64, f64) {
        let b = (self.bias_mean + 3.0 * self.bias_std).clamp(BIAS_RANGE.0, BIAS_RANGE.1);
        let c = (self.corr_mean + 3.0 * self.corr_std).clamp(CORR_RANGE.0, CORR_RANGE.1);
        (b, c)
    }
}

/// A trial configuration plus how many trials to run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub trial: TrialConfig,
    pub trials: usize,
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        self.trial.validate()?;
        if self.trials == 0 {
            return Err(Error::InvalidArgument("need at least one trial".into()));
        }
        Ok(())
    }
}
