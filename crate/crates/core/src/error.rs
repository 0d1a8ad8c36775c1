use thiserror::Error;

/// Everything that can go wrong across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A dimension or count argument was out of range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A probability parameter fell outside its legal interval.
    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    ParameterRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// The two-state chain has no stationary distribution (both
    /// switching rates are zero).
    #[error("degenerate chain: alpha + beta = 0, stationary bias undefined")]
    DegenerateChain,

    /// A pattern's length did not match the network size.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A pattern contained a value other than +1 or -1.
    #[error("pattern entry at index {index} is {value}, expected +1 or -1")]
    NotBipolar { index: usize, value: i8 },

    /// A monitor was asked to record a store it did not observe.
    #[error("monitor out of sync: {0}")]
    StateMismatch(String),

    /// The requested capacity exceeds the number of stored patterns.
    #[error("capacity probe exhausted: all {stored} stored patterns remain recallable")]
    CapacityExceeded { stored: usize },

    /// An empty result set was handed to the report writer.
    #[error("nothing to report: result set is empty")]
    EmptyResults,

    /// Wrapper for I/O failures during serialization.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    /// Wrapper for CSV encoding failures.
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    /// Wrapper for JSON encoding failures.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Shorthand used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
