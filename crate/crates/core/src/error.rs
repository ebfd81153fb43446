use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain exponent must be a finite real >= 1, got {0}")]
    InvalidExponent(f64),

    #[error("operation needs an integer domain exponent, got {0}")]
    NonIntegerExponent(f64),

    #[error("point ({z1}, {z2}) is outside the closed domain")]
    OutsideDomain { z1: Complex64, z2: Complex64 },

    #[error("point ({z1}, {z2}) is not an interior point")]
    NotInterior { z1: Complex64, z2: Complex64 },

    #[error("near-singular kernel evaluation: |{factor}| = {magnitude:e} below floor {floor:e}")]
    NearSingular {
        factor: &'static str,
        magnitude: f64,
        floor: f64,
    },

    #[error("series did not converge by degree {degree}: last shell {last_shell:e} exceeds tolerance {tolerance:e}")]
    SeriesNotConverged {
        degree: u32,
        last_shell: f64,
        tolerance: f64,
    },

    #[error("radial moment ({m1}, {m2}) diverges: {condition} violated")]
    DivergentMoment {
        m1: f64,
        m2: f64,
        condition: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integrand failed at ({z1}, {z2}): {source}")]
    Integrand {
        z1: Complex64,
        z2: Complex64,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
