use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid does not cover the required support: {0}")]
    DomainCoverage(String),

    #[error("observable is not finite at ({q}, {s})")]
    NonFinite { q: f64, s: f64 },

    #[error("operation requires the {expected} representation, state is in {found}")]
    Representation {
        expected: &'static str,
        found: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("oscillatory integral under-resolved: needs {required} nodes, limit is {limit}")]
    Resolution { required: usize, limit: usize },

    #[error("momentum expectation is not real: imaginary part {0:e}")]
    SelfAdjointness(f64),

    #[error("invalid slit geometry: {0}")]
    Geometry(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Non-fatal conditions surfaced alongside a result.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// Probability mass carried out of the grid by the flow.
    MassLoss { fraction: f64 },
    /// A slit receives almost no amplitude at the plate crossing time.
    FluxFloor { slit: usize, ratio: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::MassLoss { fraction } => {
                write!(f, "mass loss: {:.3e} of |psi|^2 left the grid", fraction)
            }
            Warning::FluxFloor { slit, ratio } => write!(
                f,
                "flux floor: slit {} sees {:.3e} of the peak amplitude",
                slit, ratio
            ),
        }
    }
}
