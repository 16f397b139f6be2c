use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument {x} lies outside the representable cosh range (|x| <= {limit})")]
    Domain { x: f64, limit: f64 },

    #[error("invalid level index {0}; only 0 and 1 are available")]
    InvalidLevel(usize),

    #[error("unknown wavepacket preset {0:?}")]
    UnknownPreset(String),

    #[error("wavepacket norm {norm} deviates from unity by more than {tolerance}")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error {error_estimate} after {intervals} intervals")]
    Quadrature {
        estimate: f64,
        error_estimate: f64,
        intervals: usize,
    },

    #[error("eigen-iteration failed to converge: {0}")]
    Eigen(String),

    #[error("no orthogonal state found up to t = {t_max}; smallest correlation {min_gamma} at t = {t_at_min}")]
    NoOrthogonalState {
        t_max: f64,
        min_gamma: f64,
        t_at_min: f64,
    },

    #[error("speed limit undefined: wavepacket has no excited-state weight")]
    UndefinedSpeedLimit,
}

pub type Result<T> = std::result::Result<T, Error>;
