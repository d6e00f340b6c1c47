//! Error taxonomy shared by every module.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A series or iteration exhausted its budget before meeting tolerance.
    #[error("did not converge: {0}")]
    NonConvergence(String),
    /// Adaptive quadrature could not meet the requested tolerance.
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    /// The requested evaluation route does not apply to these arguments.
    #[error("route unavailable: {0}")]
    RouteUnavailable(String),
    /// A Laplace-domain sample landed on a non-removable singularity.
    #[error("singular sample: {0}")]
    SingularSample(String),
    /// The explicit time-marching scheme lost mass beyond its guard.
    #[error("instability detected: {0}")]
    Instability(String),
    /// Tauberian form does not exist for this kernel/regime pair.
    #[error("asymptote inapplicable: {0}")]
    Inapplicable(String),
    /// A function handed to a checker failed to evaluate.
    #[error("evaluation error: {0}")]
    Evaluation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
