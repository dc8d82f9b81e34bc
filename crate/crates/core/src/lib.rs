//! Bayesian inference for signals in coloured noise of uncertain spectrum.
//!
//! Time series are mapped onto real Fourier coefficients `(a_j, b_j)`; each
//! frequency bin carries an unknown variance `σ_j²` with a conjugate scaled
//! inverse-χ² prior. Integrating the variances out gives a product of
//! Student-t terms that reduces to the Whittle (matched-filter) likelihood as
//! the prior degrees of freedom grow.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the command
//! line front end live in the `colnoise` crate.

#![no_std]
// with std anywhere in the build graph its inherent float methods shadow
// `num_traits::Float`, and the trait imports turn up as unused
#![allow(unused_imports)]

extern crate alloc;

pub mod error;
pub mod fourier;
pub mod inference;
pub mod likelihood;
pub mod signal;
pub mod special;
pub mod spectrum;

pub use error::{Error, Result};
pub use fourier::{
    AmplitudePhase, DftPlan, FourierCoefficients, FourierGrid, Periodogram, TimeSeries,
};
pub use likelihood::{LogLikelihood, Normalization};
pub use signal::{Ar1Config, ChirpParams, SnrValue};
pub use spectrum::{
    AutocovarianceFn, FrequencyBand, InvChiSqParams, Moment, SpectrumDraw, SpectrumPrior,
    WhitePriorTarget,
};
