//! Error types shared across the solver library.

use thiserror::Error;

/// Library-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument left the mathematical domain of an operation
    /// (non-positive volume or temperature, negative functional input, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Initial profiles violate positivity.
    #[error("invalid initial data: {0}")]
    InvalidInitialData(String),

    /// Initial profiles are incompatible with the selected boundary or
    /// far-field conditions.
    #[error("incompatible initial data: {0}")]
    IncompatibleData(String),

    /// The adaptive step controller ran out of room: dt fell below `dt_min`.
    #[error(
        "time step underflow at t = {time:.6e}: dt = {dt:.3e} below dt_min = {dt_min:.3e} \
         after {rejected} rejected attempts"
    )]
    StepFailure {
        time: f64,
        dt: f64,
        dt_min: f64,
        rejected: u32,
    },

    /// A tridiagonal system lost strict diagonal dominance.
    #[error("{system} system lost diagonal dominance at row {row} (margin {margin:.3e})")]
    SolverBreakdown {
        system: &'static str,
        row: usize,
        margin: f64,
    },

    /// The explicit reference integrator went unstable; the caller must
    /// shrink its time step.
    #[error("explicit reference integration unstable at t = {0:.6e}; shrink dt_ref")]
    OracleUnstable(f64),

    /// A refinement level of a study failed; carries the level index.
    #[error("study level {level} failed: {source}")]
    StudyLevel {
        level: usize,
        #[source]
        source: Box<Error>,
    },

    /// A constructor argument violated its documented constraint.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
