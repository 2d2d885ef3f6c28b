use thiserror::Error;

/// Failures raised by the numerical kernels and model builders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("DimensionError: {0}")]
    Dimension(String),
    #[error("NonFinite: matrix entries must be finite")]
    NonFinite,
    #[error("SingularMatrix: {0}")]
    SingularMatrix(String),
    #[error(
        "NoRealPrincipalLog: eigenvalue {re:.6e}{im:+.6e}i lies on the closed negative real axis"
    )]
    NoRealPrincipalLog { re: f64, im: f64 },
    #[error("InvalidCycle: {0}")]
    InvalidCycle(String),
    #[error("NoUniquePeriodicOrbit: I - Phi is singular (|det| = {det:.3e})")]
    NoUniquePeriodicOrbit { det: f64 },
    #[error("UnsupportedTopology: {0}")]
    UnsupportedTopology(String),
    #[error("DomainError: {0}")]
    Domain(String),
    #[error("PoleHit: evaluation point coincides with a pole")]
    PoleHit,
    #[error("ComplexEigenvalues: discriminant {discriminant:.6e} is negative")]
    ComplexEigenvalues { discriminant: f64 },
    #[error("NotLiftable: {0}")]
    NotLiftable(String),
    #[error("ProbeInfeasible: no real principal logarithm at Ts = {ts:e}")]
    ProbeInfeasible { ts: f64 },
}

impl Error {
    /// Stable machine-readable name, used as the prefix of CLI error lines.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "DimensionError",
            Error::NonFinite => "NonFinite",
            Error::SingularMatrix(_) => "SingularMatrix",
            Error::NoRealPrincipalLog { .. } => "NoRealPrincipalLog",
            Error::InvalidCycle(_) => "InvalidCycle",
            Error::NoUniquePeriodicOrbit { .. } => "NoUniquePeriodicOrbit",
            Error::UnsupportedTopology(_) => "UnsupportedTopology",
            Error::Domain(_) => "DomainError",
            Error::PoleHit => "PoleHit",
            Error::ComplexEigenvalues { .. } => "ComplexEigenvalues",
            Error::NotLiftable(_) => "NotLiftable",
            Error::ProbeInfeasible { .. } => "ProbeInfeasible",
        }
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
