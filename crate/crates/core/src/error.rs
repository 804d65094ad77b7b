use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Divergent integrals are not errors; they are reported through
/// [`crate::weights::Finiteness`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A Pochhammer denominator `(c)_j` vanished.
    #[error("pole: ({c})_{index} vanishes")]
    Pole { c: f64, index: u32 },

    /// An index lies outside the admissible range.
    #[error("index error: {0}")]
    Index(String),

    /// A parameter combination violates a stated precondition.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Newton iteration for quadrature nodes did not settle.
    #[error("convergence failure: {0}")]
    Convergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
