use thiserror::Error;

use crate::model::Region;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("x = {x} lies outside the {} region", region.name())]
    OutsideDomain { x: f64, region: Region },

    #[error("t = {t} exceeds the time horizon {horizon}")]
    TimeBeyondHorizon { t: f64, horizon: f64 },

    #[error("quadrature did not converge within {panels} panels ({what})")]
    NonIntegrable { what: String, panels: usize },

    #[error("quadrature budget exceeded for {term}: k_max {k_max} leaves tail estimate {tail:.3e} above {tolerance:.3e}")]
    QuadratureBudgetExceeded { term: String, k_max: f64, tail: f64, tolerance: f64 },

    #[error("t = {t} lies beyond the trace table horizon {horizon}")]
    TraceHorizonExceeded { t: f64, horizon: f64 },

    #[error("mesh: {0}")]
    Mesh(String),

    #[error("term list {source_name}: {message}")]
    TermList { source_name: String, message: String },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Error {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
