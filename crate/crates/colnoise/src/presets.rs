//! Named configurations of the two worked examples.

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// AR(1) noise, N = 100, Δt = 0.01, white prior with ν = 3 and
    /// prior variance expectation 2.5.
    #[value(name = "paper-3.1")]
    NoiseStudy,
    /// As above plus a chirp at SNR 15, sampled with the default chain.
    #[value(name = "paper-3.2")]
    ChirpStudy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArPreset {
    pub n: usize,
    pub dt: f64,
    pub coefficient: f64,
    pub innovation_half_width: f64,
}

/// Unit-variance uniform innovations: `h = √3`.
pub const DEFAULT_AR: ArPreset =
    ArPreset { n: 100, dt: 0.01, coefficient: 0.75, innovation_half_width: 1.732_050_807_568_877_2 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhitePreset {
    pub target_var: f64,
    pub nu: f64,
}

pub const DEFAULT_WHITE_PRIOR: WhitePreset = WhitePreset { target_var: 2.5, nu: 3.0 };

/// Injected chirp; the amplitude follows from the SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChirpPreset {
    pub f: f64,
    pub fdot: f64,
    pub phi: f64,
    pub snr: f64,
}

pub const DEFAULT_CHIRP: ChirpPreset = ChirpPreset { f: 20.0, fdot: 5.0, phi: 1.0, snr: 15.0 };
