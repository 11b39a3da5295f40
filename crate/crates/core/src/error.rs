use thiserror::Error;

use crate::quadrature::Location;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "quadrature did not converge: estimate {value} with error {err_estimate} after {subdivisions} subdivisions"
    )]
    NonConvergent {
        value: f64,
        err_estimate: f64,
        subdivisions: usize,
    },

    #[error("integrand tail decays like x^{exponent}, which is not integrable at infinity")]
    DivergentTail { exponent: f64 },

    #[error("convergence screen rejected the integral at {location}")]
    ScreenRejected { location: Location },

    #[error("fixed-point iteration diverged after {iterations} iterations (residual {residual})")]
    Diverged { iterations: usize, residual: f64 },

    #[error("iterate became non-positive at node {node} (iteration {iteration})")]
    NonPositive { iteration: usize, node: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
