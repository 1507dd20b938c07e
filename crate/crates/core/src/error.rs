use crate::spectrum::Spectrum;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("argument outside the validated range: {0}")]
    OutOfRange(String),

    #[error("bracket [{lo}, {hi}] does not contain a sign change")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("mass matrix is not positive semidefinite (eigenvalue {value:e})")]
    MassNotPsd { value: f64 },

    #[error("every basis direction was filtered out of the mass matrix")]
    EmptySubspace,

    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("spectrum not converged at the degree cap (last change {delta:e})")]
    NotConverged { delta: f64, best: Box<Spectrum> },

    #[error("radius {r} is not above the threshold radius {threshold}")]
    BelowThreshold { r: f64, threshold: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("frequency radius {r} exceeds the field radius {r_max}")]
    RadiusMismatch { r: f64, r_max: f64 },

    #[error("no exact oracle for {0}")]
    UnsupportedOracle(String),
}
