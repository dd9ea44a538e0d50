//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the numerical layers and the CLI front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("order {0} exceeds the supported maximum {1}")]
    OrderTooLarge(usize, usize),
    #[error("order {0} below the asymptotic regime this operation requires (n >= {1})")]
    OrderTooSmall(usize, usize),
    #[error("non-finite input")]
    NonFiniteInput,
    #[error("zero argument not admissible here")]
    ZeroArgument,
    #[error("invalid spherical-harmonic order: n={n}, m={m}")]
    InvalidOrder { n: usize, m: i64 },
    #[error("quadrature degree {0} too large (max {1})")]
    DegreeTooLarge(usize, usize),
    #[error("evaluation radius {radius} inconsistent with requested side/region")]
    SideMismatch { radius: f64 },
    #[error("degenerate moduli: mu = 0 or lambda + 2 mu = 0")]
    DegenerateModuli,
    #[error("linear system numerically singular (|det| ~ {det_abs:e}, condition estimate {cond:e})")]
    SingularSystem { det_abs: f64, cond: f64 },
    #[error("doubly degenerate 2x2 block: eigenvector set is the whole coefficient plane")]
    DoubleDegenerate,
    #[error("evaluation point too close to the layer surface for smooth quadrature")]
    TooCloseToSurface,
    #[error("evaluation point lies on a material interface at radius {0}")]
    OnInterface(f64),
    #[error("no bracketing interval for the requested minimization")]
    NoBracket,
    #[error("resonance not achieved: best quantity {achieved:e} <= target {target:e}")]
    ResonanceNotAchieved { achieved: f64, target: f64 },
    #[error("tuning failed: achieved minimum {achieved:e} above threshold {threshold:e}")]
    TuningFailed { achieved: f64, threshold: f64 },
    #[error("point-like source radius {0} not outside the shell")]
    SourceInsideShell(f64),
    #[error("solution does not correspond to the supplied source spectrum")]
    ModeMismatch,
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("assertion failed: {0}")]
    AssertionFailed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
