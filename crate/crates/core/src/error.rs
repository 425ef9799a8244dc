use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The adaptive integrator could not make progress.
    #[error("integration failed at epsilon = {epsilon}: {reason}")]
    IntegrationFailure { epsilon: f64, reason: String },

    /// No eigenvalue bracket was found below the configured ceiling.
    #[error("eigenvalue search exhausted: mode n = {n} not bracketed below epsilon = {ceiling}")]
    SearchExhausted { n: usize, ceiling: f64 },

    /// The confluent Heun series was evaluated outside its disk of convergence.
    #[error("point z = {z} is outside the unit disk of the Heun series")]
    OutOfDisk { z: f64 },

    /// The series did not reach the truncation threshold.
    #[error("series did not converge after {terms} terms")]
    SeriesDivergence { terms: usize },

    /// Inputs violate an operation's contract (mismatched lengths, wrong mode, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A level gap vanished where a ratio over it was required.
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    /// The work curve does not have the expected two sign changes.
    #[error("work window topology: expected 2 sign changes, found {found} ({detail})")]
    Topology { found: usize, detail: String },

    /// A refined eigenfunction has the wrong number of interior zeros.
    #[error("mode n = {n} at epsilon = {epsilon} has {nodes} interior nodes, expected {expected}")]
    NodeMismatch {
        n: usize,
        epsilon: f64,
        nodes: usize,
        expected: usize,
    },

    /// A bracketing root finder was handed an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
}
