use thiserror::Error;

/// Unified error type for the solver and audit laboratory.
#[derive(Debug, Error)]
pub enum Error {
    /// Bad configuration value; carries the offending key.
    #[error("configuration error for `{key}`: {reason}")]
    Config { key: String, reason: String },

    /// Non-finite data where finite values are required.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Elliptic problem has no solution for the given data.
    #[error("solvability error: {0}")]
    Solvability(String),

    /// API misuse (rank mismatch, missing tendency, out-of-order sample).
    #[error("usage error: {0}")]
    Usage(String),

    /// Input violates a model-level precondition (e.g. non-solenoidal velocity).
    #[error("model error: {0}")]
    Model(String),

    /// Initial-data scenario cannot meet its scaling targets.
    #[error("scenario error: {0}")]
    Scenario(String),

    /// Time integration produced non-finite values.
    #[error("blow-up at step {step} (t = {t})")]
    BlowUp { step: usize, t: f64 },

    /// A smallness/regime condition of the estimate chain failed.
    #[error("regime violation: {0}")]
    Regime(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
