use thiserror::Error;

/// Errors raised by the exact and numerical layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("denominator magnitude {magnitude:e} below floor {floor:e}")]
    DenominatorVanishes { magnitude: f64, floor: f64 },

    #[error("cross-derivative compatibility failed: d/dt(f'g') != d/dz(-i(g''f' - g'f''))")]
    CompatibilityFailure,

    #[error("order {order} exceeds degree cap {cap}")]
    DegreeCap { order: u32, cap: u32 },

    #[error("resultant in z is identically zero (g and h share a factor for all t)")]
    ResultantZeroPolynomial,

    #[error("point is not a zero of the polynomial")]
    NotAZero,

    #[error("polynomial vanishes identically on the requested slice")]
    IdenticallyZero,

    #[error("ray limit did not converge; last extrapolants {sequence:?}")]
    NotConverged { sequence: Vec<(f64, f64)> },

    #[error("quadrature did not converge: achieved error {achieved:e}, target {target:e}")]
    NoConvergence { achieved: f64, target: f64 },

    #[error("{masked} of {total} grid nodes masked (limit fraction {limit:e})")]
    TooManyMaskedNodes {
        masked: usize,
        total: usize,
        limit: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
