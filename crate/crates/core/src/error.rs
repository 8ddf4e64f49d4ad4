use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor or operation received a value outside its domain.
    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The adaptive Fock cutoff hit the hard cap before the tail bound was met.
    #[error("truncation needs n_max > {cap} to reach tail bound {eps:e}")]
    TruncationOverflow { cap: usize, eps: f64 },

    #[error("argument {x} outside [-1, 1]")]
    Domain { x: f64 },

    #[error("every sample of the sensitivity search was a stationary point")]
    SearchFailure,

    #[error("metric undefined: {0}")]
    MetricUndefined(&'static str),

    /// Probability mass pushed past the oracle lattice cutoff.
    #[error("truncation leakage {leakage:e} exceeds threshold {threshold:e}")]
    LeakageExceeded { leakage: f64, threshold: f64 },
}
