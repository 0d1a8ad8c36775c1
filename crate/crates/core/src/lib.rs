//! Associative-memory capacity experiments: a Hopfield network with
//! Hebbian storage, a chain-based generator for biased and correlated
//! patterns, an online crosstalk monitor that estimates when the next
//! store would destroy a memory, closed-form static baselines to compare
//! against, and a Monte Carlo harness tying them together.

pub mod baselines;
pub mod crosstalk;
pub mod error;
pub mod harness;
pub mod hopfield;
pub mod markov;
pub mod pattern;

pub use baselines::{BaselineModel, StaticEstimate};
pub use crosstalk::{CapacityVerdict, CrosstalkMonitor, WeightingMode};
pub use error::{Error, Result};
pub use harness::{RecallSemantics, SuiteConfig, SuiteSummary, TrialConfig, TrialRecord};
pub use hopfield::{Network, RelaxOutcome, WeightMatrix};
pub use markov::ChainStatistics;
pub use pattern::{PatternSet, PatternStream};
