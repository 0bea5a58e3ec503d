use thiserror::Error;

/// Failure categories shared by every engine. The CLI maps each variant to
/// its own exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent caller input.
    #[error("invalid input: {0}")]
    Input(String),
    /// The computation left the regime the engine supports.
    #[error("unsupported regime: {0}")]
    Regime(String),
    /// Malformed table or config text.
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },
    /// A stabilizer computation found a positive-dimensional solution family.
    #[error("infinite stabilizer: {0}")]
    InfiniteStabilizer(String),
}

pub type Result<T> = std::result::Result<T, Error>;
