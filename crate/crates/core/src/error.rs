use thiserror::Error;

/// Errors reported by lattice construction, estimation and benchmarking.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("latitude {0} is outside [-90, 90] degrees")]
    InvalidLatitude(f64),

    #[error("longitude {0} is not finite")]
    InvalidLongitude(f64),

    #[error("angular radius {0} is outside [0, pi] radians")]
    InvalidRadius(f64),

    #[error("area fraction {0} is outside [0, 1]")]
    InvalidFraction(f64),

    #[error("cap fraction {0} is outside the required range {1}")]
    FractionOutOfRange(f64, &'static str),

    #[error("invalid lattice parameter: {0}")]
    InvalidParam(String),

    #[error("spiral parameter {t} is outside [-{limit}, {limit}]")]
    SpiralRange { t: f64, limit: f64 },

    #[error("lattice has no points")]
    EmptyLattice,

    #[error("lattice weights sum to zero; the estimate cannot be normalized")]
    ZeroWeight,

    #[error("invalid trial plan: {0}")]
    InvalidPlan(String),

    #[error("sweep contains no cells")]
    EmptySweep,

    #[error("power-law fit needs {0}")]
    InvalidFitInput(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
