// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by the physics pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "quadrature did not converge: value {value:e}, error estimate {abs_error:e} \
         after {evaluations} evaluations"
    )]
    NonConvergent {
        value: f64,
        abs_error: f64,
        evaluations: usize,
    },

    #[error("integrand returned a non-finite value at x = {0:e}")]
    NonFiniteEvaluation(f64),

    #[error("grid resolution: {0}")]
    GridResolution(String),

    #[error("shift {shift:e} is not an integer multiple of the grid spacing {dk:e}")]
    NonCommensurateShift { shift: f64, dk: f64 },

    #[error("unstable step: dt * collision rate = {product:e} (must stay below {limit})")]
    Stability { product: f64, limit: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("an initial spread is required for this query")]
    MissingInitialSpread,

    #[error("orbit velocity {velocity_mps:e} m/s exceeds 0.1 c; the Bohr construction is not valid")]
    RelativisticRegime { velocity_mps: f64 },

    #[error("profile has {0} points, at least 8 are required")]
    InsufficientGrid(usize),
}

impl Error {
    /// True for failures of a numerical method, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergent { .. } | Error::NonFiniteEvaluation(_) | Error::Stability { .. }
        )
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
