use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("{name} = {value} lies outside [{lo}, {hi}]")]
    AngleOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("transform size {size} must exceed the time step {t}")]
    TransformTooSmall { size: usize, t: usize },

    #[error("state at t = {t} needs {expected} sites per component, got {got}")]
    ShapeMismatch { t: usize, expected: usize, got: usize },

    #[error("non-finite amplitude at site {site}")]
    NonFinite { site: usize },

    #[error("norm drifted by {drift:e} (tolerance {tolerance:e})")]
    NormDrift { drift: f64, tolerance: f64 },

    #[error("inverse transform leaves amplitude {max:e} outside the support 0..={t}")]
    NonVanishingTail { t: usize, max: f64 },

    #[error("Λ table covers t <= {have}, needs t = {need}")]
    TableTooShort { have: usize, need: usize },

    #[error("states are not at consecutive times (t = {first}, t = {second})")]
    TimeMismatch { first: usize, second: usize },

    #[error("ν = {nu} outside the open interval ({lo}, {hi})")]
    OutsideAllowedInterval { nu: f64, lo: f64, hi: f64 },

    #[error("degenerate configuration: {0}")]
    Degenerate(&'static str),

    #[error("singular configuration: {0}")]
    Singular(&'static str),

    #[error("invalid probability mass function: {0}")]
    InvalidPmf(String),
}

pub type Result<T> = std::result::Result<T, WalkError>;
