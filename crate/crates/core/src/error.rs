use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coupling J[{index}] = {value} is not strictly positive")]
    NonPositiveCoupling { index: usize, value: f64 },

    #[error("length mismatch for {what}: expected {expected}, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("dual grid is not strictly increasing at index {index}")]
    NonMonotoneDual { index: usize },

    #[error("tridiagonal eigensolver failed to converge for eigenvalue {index}")]
    ConvergenceFailure { index: usize },

    #[error("index {index} out of range (valid: 0..={max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("spectrum has a repeated eigenvalue at position {index}")]
    DegenerateSpectrum { index: usize },

    #[error("reconstructed J[{index}]^2 = {value} is not positive")]
    NegativeJSquared { index: usize, value: f64 },

    #[error("synthesized chain fails its round-trip check (residual {residual:e})")]
    ConditioningFailure { residual: f64 },

    #[error("mode {index} has non-positive energy {omega}; shift the fields so the spectrum is positive")]
    NonPositiveSpectrum { index: usize, omega: f64 },

    #[error("chain is not mirror symmetric (residual {residual:e})")]
    NotMirrorSymmetric { residual: f64 },

    #[error("temperature difference {dt} is outside the linear-response window for T = {t}")]
    GradientTooLarge { dt: f64, t: f64 },

    #[error("chain has no dual grid; the Heun operator needs one")]
    MissingDualGrid,

    #[error("no negative-energy mode: the Fermi sea is empty")]
    EmptyFermiSea,

    #[error("operators do not commute (normalized residual {residual:e})")]
    NotCommuting { residual: f64 },

    #[error("Heun operator spectrum is degenerate (minimum gap {gap:e})")]
    DegenerateT { gap: f64 },

    #[error("root finder did not converge (best residuals {residuals:?})")]
    NoConvergence { residuals: [f64; 2] },

    #[error("I + J+J- is numerically singular (condition number {condition:e})")]
    SingularResolvent { condition: f64 },

    #[error("negativity spectral sum has imaginary part {imag:e}")]
    ImaginaryLeak { imag: f64 },

    #[error("fit needs at least {needed} points, got {found}")]
    InsufficientPoints { needed: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
