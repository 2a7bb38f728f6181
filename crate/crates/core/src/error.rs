use thiserror::Error;

/// Errors raised by the simulation layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("hermiticity violated (deviation {deviation:e})")]
    HermiticityViolated { deviation: f64 },

    #[error("trace collapse (tr = {trace:e})")]
    TraceCollapse { trace: f64 },

    #[error("Rabi frequency must be positive (got {0})")]
    NonPositiveRabi(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("analytic matrix valid only at N=0 (got N = {0})")]
    ThermalUnsupported(f64),

    #[error("propagator overflow")]
    PropagatorOverflow,

    #[error("integration diverged at tau = {tau}")]
    Diverged { tau: f64 },

    #[error("no steady state (oscillatory regime?)")]
    NoSteadyState,

    #[error("no unique steady state (undamped)")]
    Undamped,

    #[error("oscillatory regime; use ah_oscillatory")]
    OscillatoryRegime,

    #[error("alpha=0 entries singular; use expm4 path")]
    SingularAlpha,

    #[error("not oscillatory (|gt| = {0} >= 1)")]
    NotOscillatory(f64),

    #[error("closed form returned a complex value (imaginary part {0:e})")]
    ComplexResidue(f64),

    #[error("signal not decaying")]
    SignalNotDecaying,

    #[error("invalid evolve config: {0}")]
    InvalidConfig(String),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input or configuration.
    Config,
    /// Parameters outside the requested solution branch.
    Domain,
    /// Overflow, divergence, non-convergence.
    Numerical,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::HermiticityViolated { .. }
            | Error::NonPositiveRabi(_)
            | Error::InvalidParameter(_)
            | Error::InvalidConfig(_) => ErrorKind::Config,
            Error::ThermalUnsupported(_)
            | Error::Undamped
            | Error::OscillatoryRegime
            | Error::SingularAlpha
            | Error::NotOscillatory(_) => ErrorKind::Domain,
            Error::TraceCollapse { .. }
            | Error::PropagatorOverflow
            | Error::Diverged { .. }
            | Error::NoSteadyState
            | Error::ComplexResidue(_)
            | Error::SignalNotDecaying => ErrorKind::Numerical,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
