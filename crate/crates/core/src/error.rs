use thiserror::Error;

use crate::expr::ExprError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error("quadrature did not converge (estimate {estimate:e}, error bound {error:e})")]
    Convergence { estimate: f64, error: f64 },

    #[error("integrand is not finite at t = {at}")]
    NonFiniteIntegrand { at: f64 },

    #[error("no sign change on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    /// Caller supplied parameters outside a theorem's or routine's range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A space failed one of its construction invariants.
    #[error("invariant `{invariant}` violated: {detail}")]
    Invariant { invariant: String, detail: String },

    /// Evaluation outside the radial range where a quantity is defined.
    #[error("out of range: {0}")]
    Range(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("scenario error: {0}")]
    Scenario(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub(crate) fn invariant(invariant: &str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            invariant: invariant.to_string(),
            detail: detail.into(),
        }
    }

    /// True for errors caused by bad input rather than numerical trouble.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parameter(_) | Error::Invariant { .. } | Error::Scenario(_)
        ) || matches!(self, Error::Expr(e) if e.is_syntax())
    }
}
