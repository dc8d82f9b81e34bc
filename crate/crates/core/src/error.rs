use thiserror::Error;

/// Errors raised by the model, transform and sampling routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample {index} is not finite")]
    NonFiniteSample { index: usize },

    #[error("a time series needs at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("sampling interval must be positive and finite, got {0}")]
    InvalidInterval(f64),

    #[error("input is empty")]
    Empty,

    #[error("expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("sine coefficient b_{index} must be zero, got {value}")]
    NonZeroSineTerm { index: usize, value: f64 },

    #[error("bin index {index} outside 0..={max}")]
    BinOutOfRange { index: usize, max: usize },

    #[error("frequency grids do not match")]
    GridMismatch,

    #[error("invalid {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("probability {0} outside (0, 1)")]
    InvalidProbability(f64),

    #[error("improper distribution (nu = {nu}, s2 = {s2})")]
    Improper { nu: f64, s2: f64 },

    #[error("improper prior at bin {bin} (nu = {nu}) has no marginal likelihood")]
    UnsupportedImproper { bin: usize, nu: f64 },

    #[error("variance at bin {bin} must be positive and finite, got {value}")]
    NonPositiveVariance { bin: usize, value: f64 },

    #[error("band ({lower}, {upper}] is narrower than one frequency step")]
    BandTooNarrow { lower: f64, upper: f64 },

    #[error("band ({lower}, {upper}] contains no Fourier frequency")]
    EmptyBand { lower: f64, upper: f64 },

    #[error("bands must cover every bin exactly once; bin {bin} is {problem}")]
    BandPartition { bin: usize, problem: &'static str },

    #[error("cannot combine a normalized and a proportional log-likelihood")]
    MixedNormalization,

    #[error("log target is not finite at the initial state")]
    NonFiniteInitialState,

    #[error("invalid chain configuration: {0}")]
    InvalidChainConfig(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
