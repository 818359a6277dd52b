use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("density is not normalized: total mass {mass} (expected 1 within {tol:e})")]
    NonNormalized { mass: f64, tol: f64 },

    #[error("density has a negative or non-finite value {value} at index {index}")]
    InvalidDensity { index: usize, value: f64 },

    #[error("CDF is not strictly monotone on cell {cell} (increment {increment:e})")]
    NotStrictlyMonotone { cell: usize, increment: f64 },

    #[error("value {value} outside the domain {domain}")]
    DomainError { value: f64, domain: &'static str },

    #[error("empirical measure has no atoms")]
    EmptyMeasure,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("beta = {0} is outside [0, 1)")]
    InvalidBeta(f64),

    #[error("quantile branch evaluation failed at xi = {xi}")]
    BranchEvaluation { xi: f64 },

    #[error("kernel queried at separation {separation} outside its table [{lo}, {hi}]")]
    KernelDomain { separation: f64, lo: f64, hi: f64 },

    #[error("non-finite state at step {step} (t = {time})")]
    NonFinite { step: usize, time: f64 },

    #[error("truncated Fourier tail |c_{mode}| = {modulus} exceeds 0.5")]
    TailBlowup { mode: usize, modulus: f64 },

    #[error("CFL violation at step {step}: dt = {dt:e} exceeds {limit:e}; use a smaller dt")]
    CflViolation { step: usize, dt: f64, limit: f64 },

    #[error(
        "drift quadrature error {estimate:e} per unit time exceeds 1e-6; store more time slices"
    )]
    DriftQuadrature { estimate: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
