use thiserror::Error;

/// Errors raised by the solvers and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A hypergeometric series hit its term cap before converging.
    #[error("series not converged after {terms} terms (last term magnitude {last_term:e})")]
    Truncation { terms: usize, last_term: f64 },

    /// An argument fell outside the domain of a function.
    #[error("{what} = {value} is outside the admissible domain")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// A root or tangency bracket could not be established.
    #[error("no bracket found for {0}")]
    Bracket(&'static str),

    #[error("time step {dt:e} exceeds the stability bound {bound:e}")]
    Cfl { dt: f64, bound: f64 },

    #[error("non-finite value in the simulation at t = {t}")]
    BlowUp { t: f64 },

    /// The front reached the pollution guard near the truncated edge too early.
    #[error("front reached x = {front} (guard at {guard}) at t = {t}; enlarge the domain")]
    DomainTooSmall { t: f64, front: f64, guard: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
