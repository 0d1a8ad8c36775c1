//! Monte Carlo experiment harness: draw chain parameters, fill a
//! network pattern by pattern, watch when each capacity model says to
//! stop, and compare that against the first real recall failure.

mod config;
mod report;
mod suite;
mod trial;
mod verify;

pub use config::{
    RecallSemantics, SuiteConfig, TrialConfig, BIAS_RANGE, CORR_RANGE, DEFAULT_RELAX_SWEEPS,
};
pub use report::{
    comparison_svg, emit_grid, emit_results, read_results_csv, OutputFormat, SummaryRow,
};
pub use suite::{run_suite, ModelAggregate, SuiteSummary, MODEL_ORDER};
pub use trial::{run_trial, true_capacity, ModeEstimates, ModeTraces, ModelOutcome, TrialRecord};
pub use verify::{verify_generator, GridCell, GridReport};
