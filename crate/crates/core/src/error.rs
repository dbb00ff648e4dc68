use crate::partitions::WeightedCount;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A degree slice exceeded the configured matrix-size budget. Results
    /// computed before the limit was hit are carried along.
    #[error("resource limit exceeded: {detail}")]
    ResourceLimit {
        detail: String,
        partial: WeightedCount,
    },

    /// The semi-infinite table did not stabilize within the probe bound.
    #[error("no stabilization within m >= -{bound}: {detail}")]
    StabilizationFailed { bound: u32, detail: String },

    /// Inconsistency that signals a bug, never expected data (for example a
    /// negative multiplicity out of the character division).
    #[error("internal error: {0}")]
    Internal(String),
}
