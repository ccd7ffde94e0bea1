use thiserror::Error;

/// Everything that can go wrong when building inputs or running a scheduler.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Arrival sequence violates an invariant (ordering, signs, emptiness).
    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    /// An argument is outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// The bit load can never be delivered, even with unbounded time: the
    /// requested bits sit at or above the asymptotic capacity limit of the
    /// energy in play.
    #[error("infeasible: {bits} bits requested but the capacity limit is {limit} bits")]
    Infeasible { bits: f64, limit: f64 },

    /// The lazy policy requires the load to be deliverable from the first
    /// energy packet alone; callers should fall back to GLO.
    #[error(
        "lazy precondition violated: {bits} bits exceed the first-arrival \
         capacity limit {limit}; use GLO instead"
    )]
    LazyPrecondition { bits: f64, limit: f64 },

    /// A configuration value (fraction, horizon, grid) is out of range or
    /// inconsistent.
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
