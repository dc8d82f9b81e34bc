//! Posterior sampling of chirp parameters under the three noise treatments:
//! spectrum marginalized (Student-t), spectrum fixed, and white noise of
//! unknown variance (Gibbs).

use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand_distr::Distribution;

use super::metropolis::{run_chain, tune_proposal, ChainConfig, Proposal, RandomWalk, TuningConfig};
use super::sampling::{conditional_noise_draw_from_powers, pooled_white_posterior, InvChiSqSampler};
use super::summary::{circular_contains, summarize, summarize_circular, ParameterSummary};
use super::{chain_rng, STREAM_AUGMENT, STREAM_MAIN, STREAM_TUNING};
use crate::error::{Error, Result};
use crate::fourier::{DftPlan, FourierGrid, TimeSeries};
use crate::signal::{chirp_into, ChirpParams};
use crate::spectrum::{InvChiSqParams, SpectrumDraw, SpectrumPrior};

/// Column order of chirp parameter vectors.
pub const PARAMETER_NAMES: [&str; 4] = ["f", "fdot", "a", "phi"];

const PERIODS: [Option<f64>; 4] = [None, None, None, Some(2.0 * PI)];

/// Independent priors on the chirp parameters: uniform `f` and `a`, normal
/// `ḟ`, uniform `φ` on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChirpPrior {
    pub f_min: f64,
    pub f_max: f64,
    pub a_min: f64,
    /// Equal to `a_min` pins the amplitude.
    pub a_max: f64,
    pub fdot_mean: f64,
    pub fdot_sd: f64,
}

impl Default for ChirpPrior {
    fn default() -> Self {
        Self { f_min: 1.0, f_max: 50.0, a_min: 0.0, a_max: 10.0, fdot_mean: 0.0, fdot_sd: 5.0 }
    }
}

impl ChirpPrior {
    pub fn new(f_min: f64, f_max: f64, a_min: f64, a_max: f64, fdot_mean: f64, fdot_sd: f64) -> Result<Self> {
        let prior = Self { f_min, f_max, a_min, a_max, fdot_mean, fdot_sd };
        prior.validate()?;
        Ok(prior)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.f_min, self.f_max, self.a_min, self.a_max, self.fdot_mean, self.fdot_sd];
        if let Some(v) = all.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter { name: "signal prior bound", value: *v });
        }
        if !(self.f_min < self.f_max) {
            return Err(Error::InvalidParameter { name: "frequency upper bound", value: self.f_max });
        }
        if !(self.a_min >= 0.0 && self.a_min <= self.a_max) {
            return Err(Error::InvalidParameter { name: "amplitude bounds", value: self.a_min });
        }
        if !(self.fdot_sd > 0.0) {
            return Err(Error::InvalidParameter { name: "frequency derivative sd", value: self.fdot_sd });
        }
        Ok(())
    }

    /// Copy with the amplitude pinned to zero (noise-only model).
    pub fn noise_only(self) -> Self {
        Self { a_min: 0.0, a_max: 0.0, ..self }
    }

    pub fn in_support(&self, x: &[f64]) -> bool {
        (self.f_min..=self.f_max).contains(&x[0]) && (self.a_min..=self.a_max).contains(&x[2]) && x[1].is_finite()
    }

    /// Normalized log density of `[f, ḟ, a, φ]`; `-∞` outside the support.
    /// A pinned amplitude contributes no density term.
    pub fn log_density(&self, x: &[f64]) -> f64 {
        if !self.in_support(x) {
            return f64::NEG_INFINITY;
        }
        let z = (x[1] - self.fdot_mean) / self.fdot_sd;
        let mut value = -0.5 * z * z - (self.fdot_sd * (2.0 * PI).sqrt()).ln() - (self.f_max - self.f_min).ln()
            - (2.0 * PI).ln();
        if self.a_max > self.a_min {
            value -= (self.a_max - self.a_min).ln();
        }
        value
    }
}

/// How the noise spectrum enters the signal posterior.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseModel {
    /// Per-bin variances integrated out against this proper prior.
    MarginalT(SpectrumPrior),
    /// Variances taken as known.
    FixedSpectrum(SpectrumDraw),
    /// One variance shared by all bins, with this prior; sampled by Gibbs.
    WhiteUnknown(InvChiSqParams),
}

/// Grid used to pick a starting point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitSearch {
    pub f_step: f64,
    pub fdot_step: f64,
    /// Half-width of the `ḟ` grid in prior standard deviations.
    pub fdot_sds: f64,
}

impl Default for InitSearch {
    fn default() -> Self {
        Self { f_step: 0.25, fdot_step: 0.5, fdot_sds: 3.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerSettings {
    pub chain: ChainConfig,
    pub tuning: TuningConfig,
    /// Attach a conditional spectrum draw to every retained sample
    /// (marginal model only).
    pub augment_noise: bool,
    /// Starting point; searched for on a grid when absent.
    pub init: Option<ChirpParams>,
    pub search: InitSearch,
}

impl SamplerSettings {
    /// 10⁵ recorded-phase steps, 10⁴ burn-in, every 10th kept.
    pub fn with_seed(seed: u64) -> Self {
        Self {
            chain: ChainConfig {
                iterations: 100_000,
                burn_in: 10_000,
                thinning: 10,
                seed,
                proposal_scales: alloc::vec![0.05, 0.5, 0.05, 0.05],
            },
            tuning: TuningConfig::default(),
            augment_noise: false,
            init: None,
            search: InitSearch::default(),
        }
    }
}

/// One retained state of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSample {
    pub iteration: usize,
    pub signal: Option<ChirpParams>,
    pub noise: Option<SpectrumDraw>,
    pub log_target: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChirpRun {
    pub samples: Vec<PosteriorSample>,
    pub init: ChirpParams,
    pub acceptance_rate: f64,
    pub non_finite: u64,
    /// The frozen proposal used for the recorded chain.
    pub proposal: Proposal,
}

impl ChirpRun {
    /// Values of one parameter, in [`PARAMETER_NAMES`] order.
    pub fn column(&self, index: usize) -> Vec<f64> {
        self.samples.iter().filter_map(|s| s.signal.map(|p| p.as_array()[index])).collect()
    }

    pub fn summary(&self) -> Result<ChirpSummary> {
        Ok(ChirpSummary {
            f: summarize(&self.column(0))?,
            fdot: summarize(&self.column(1))?,
            a: summarize(&self.column(2))?,
            phi: summarize_circular(&self.column(3))?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChirpSummary {
    pub f: ParameterSummary,
    pub fdot: ParameterSummary,
    pub a: ParameterSummary,
    /// Circular summary; see [`summarize_circular`].
    pub phi: ParameterSummary,
}

impl ChirpSummary {
    pub fn as_array(&self) -> [ParameterSummary; 4] {
        [self.f, self.fdot, self.a, self.phi]
    }

    /// Per-parameter interval coverage of `truth`.
    pub fn covers(&self, truth: &ChirpParams) -> [bool; 4] {
        [
            self.f.contains(truth.f),
            self.fdot.contains(truth.fdot),
            self.a.contains(truth.a),
            circular_contains(&self.phi, truth.phi),
        ]
    }
}

/// Residual powers `a_j² + b_j²` of `data - chirp(params)`.
struct Residual {
    data: Vec<f64>,
    dt: f64,
    plan: DftPlan,
    wave: Vec<f64>,
    scratch: Vec<Complex64>,
    powers: Vec<f64>,
}

impl Residual {
    fn new(data: &TimeSeries) -> Result<Self> {
        Ok(Self {
            data: data.samples().to_vec(),
            dt: data.dt(),
            plan: DftPlan::new(data.len())?,
            wave: Vec::with_capacity(data.len()),
            scratch: Vec::new(),
            powers: Vec::new(),
        })
    }

    fn powers(&mut self, x: &[f64]) -> &[f64] {
        let params = ChirpParams { f: x[0], fdot: x[1], a: x[2], phi: x[3] };
        chirp_into(&params, self.data.len(), self.dt, &mut self.wave);
        for (w, d) in self.wave.iter_mut().zip(&self.data) {
            *w = d - *w;
        }
        self.plan.powers_into(&self.wave, self.dt, &mut self.scratch, &mut self.powers);
        &self.powers
    }
}

/// Proportional log likelihood of residual powers.
enum Scorer {
    StudentT { nu_s2: Vec<f64>, half_total: Vec<f64> },
    Known { inv_two_sigma2: Vec<f64> },
    /// The white model with its variance integrated out, used only to rank
    /// starting points.
    PooledWhite { nu_s2: f64, half_total: f64 },
}

impl Scorer {
    fn score(&self, powers: &[f64]) -> f64 {
        match self {
            Scorer::StudentT { nu_s2, half_total } => -powers
                .iter()
                .zip(nu_s2)
                .zip(half_total)
                .map(|((q, v), h)| h * (q / v).ln_1p())
                .sum::<f64>(),
            Scorer::Known { inv_two_sigma2 } => {
                -powers.iter().zip(inv_two_sigma2).map(|(q, w)| q * w).sum::<f64>()
            }
            Scorer::PooledWhite { nu_s2, half_total } => -half_total * (nu_s2 + powers.iter().sum::<f64>()).ln(),
        }
    }
}

fn student_scorer(prior: &SpectrumPrior) -> Result<Scorer> {
    let grid = prior.grid();
    if let Some((bin, p)) = prior.bins().iter().enumerate().find(|(_, p)| p.is_improper()) {
        return Err(Error::UnsupportedImproper { bin, nu: p.nu() });
    }
    Ok(Scorer::StudentT {
        nu_s2: prior.bins().iter().map(|p| p.nu() * p.s2()).collect(),
        half_total: prior.bins().iter().enumerate().map(|(j, p)| 0.5 * (p.nu() + grid.kappa(j) as f64)).collect(),
    })
}

fn check_setup(data: &TimeSeries, grid: &FourierGrid, signal_prior: &ChirpPrior, settings: &SamplerSettings) -> Result<()> {
    data.grid().ensure_same(grid)?;
    signal_prior.validate()?;
    settings.chain.validate()?;
    if settings.chain.proposal_scales.len() != 4 {
        return Err(Error::LengthMismatch { expected: 4, actual: settings.chain.proposal_scales.len() });
    }
    Ok(())
}

/// Best point of an `(f, ḟ)` grid; amplitude and phase come from a linear
/// least-squares fit at each grid point, clamped into the prior support.
fn grid_search(
    residual: &mut Residual,
    scorer: &Scorer,
    prior: &ChirpPrior,
    search: &InitSearch,
) -> Result<ChirpParams> {
    if !(search.f_step > 0.0 && search.fdot_step > 0.0 && search.fdot_sds >= 0.0) {
        return Err(Error::InvalidParameter { name: "initial search step", value: search.f_step });
    }
    let n = residual.data.len();
    let dt = residual.dt;
    let f_count = ((prior.f_max - prior.f_min) / search.f_step).floor() as usize + 1;
    let half = search.fdot_sds * prior.fdot_sd;
    let fdot_count = (2.0 * half / search.fdot_step).floor() as usize + 1;
    let mut best: Option<(f64, [f64; 4])> = None;
    let mut s = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    for fi in 0..f_count {
        let f = prior.f_min + fi as f64 * search.f_step;
        for di in 0..fdot_count {
            let fdot = prior.fdot_mean - half + di as f64 * search.fdot_step;
            s.clear();
            c.clear();
            for k in 0..n {
                let t = k as f64 * dt;
                let (sin, cos) = (2.0 * PI * (f + fdot * t) * t).sin_cos();
                s.push(sin);
                c.push(cos);
            }
            let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
            let (ss, sc, cc) = (dot(&s, &s), dot(&s, &c), dot(&c, &c));
            let (xs, xc) = (dot(&residual.data, &s), dot(&residual.data, &c));
            let det = ss * cc - sc * sc;
            let (alpha, beta) = if det.abs() > 1e-12 * ss * cc {
                ((cc * xs - sc * xc) / det, (ss * xc - sc * xs) / det)
            } else {
                (0.0, 0.0)
            };
            let a = alpha.hypot(beta).clamp(prior.a_min, prior.a_max);
            let phi = crate::signal::wrap_phase(beta.atan2(alpha));
            let x = [f, fdot, a, phi];
            let value = scorer.score(residual.powers(&x)) + prior.log_density(&x);
            if value.is_finite() && best.is_none_or(|(b, _)| value > b) {
                best = Some((value, x));
            }
        }
    }
    let (_, x) = best.ok_or(Error::NonFiniteInitialState)?;
    ChirpParams::new(x[0], x[1], x[2], x[3])
}

fn initial_point(
    residual: &mut Residual,
    scorer: &Scorer,
    prior: &ChirpPrior,
    settings: &SamplerSettings,
) -> Result<ChirpParams> {
    match settings.init {
        Some(p) => Ok(p),
        None => grid_search(residual, scorer, prior, &settings.search),
    }
}

fn to_params(x: &[f64]) -> ChirpParams {
    ChirpParams { f: x[0], fdot: x[1], a: x[2], phi: x[3] }
}

fn run_metropolis(
    data: &TimeSeries,
    scorer: Scorer,
    signal_prior: &ChirpPrior,
    settings: &SamplerSettings,
) -> Result<(Residual, super::metropolis::Chain, ChirpParams, Proposal)> {
    let mut residual = Residual::new(data)?;
    let init = initial_point(&mut residual, &scorer, signal_prior, settings)?;
    let mut target = |x: &[f64]| {
        let lp = signal_prior.log_density(x);
        if !lp.is_finite() {
            return f64::NEG_INFINITY;
        }
        scorer.score(residual.powers(x)) + lp
    };
    let start = init.as_array();
    let start_value = target(&start);
    let proposal = Proposal::diagonal(&settings.chain.proposal_scales)?.with_periods(&PERIODS)?;
    let mut walker = RandomWalk::new(proposal, start.to_vec(), start_value)?;
    let mut tuning_rng = chain_rng(settings.chain.seed, STREAM_TUNING);
    tune_proposal(&mut target, &mut walker, &settings.tuning, &mut tuning_rng)?;
    let mut rng = chain_rng(settings.chain.seed, STREAM_MAIN);
    let chain = run_chain(&mut target, &mut walker, &settings.chain, &mut rng)?;
    let proposal = walker.proposal().clone();
    Ok((residual, chain, init, proposal))
}

/// Metropolis on `(f, ḟ, a, φ)` with the spectrum integrated out against
/// `prior`. With `augment_noise`, each retained sample also gets a spectrum
/// drawn from its conditional posterior given that sample's residual.
pub fn marginal_signal_sampler(
    data: &TimeSeries,
    prior: &SpectrumPrior,
    signal_prior: &ChirpPrior,
    settings: &SamplerSettings,
) -> Result<ChirpRun> {
    check_setup(data, prior.grid(), signal_prior, settings)?;
    let scorer = student_scorer(prior)?;
    let (mut residual, chain, init, proposal) = run_metropolis(data, scorer, signal_prior, settings)?;
    let mut aug_rng = chain_rng(settings.chain.seed, STREAM_AUGMENT);
    let mut samples = Vec::with_capacity(chain.samples.len());
    for s in &chain.samples {
        let noise = if settings.augment_noise {
            Some(conditional_noise_draw_from_powers(prior, residual.powers(&s.params), &mut aug_rng)?)
        } else {
            None
        };
        samples.push(PosteriorSample {
            iteration: s.iteration,
            signal: Some(to_params(&s.params)),
            noise,
            log_target: s.log_target,
        });
    }
    Ok(ChirpRun { samples, init, acceptance_rate: chain.acceptance_rate(), non_finite: chain.non_finite, proposal })
}

/// Metropolis on `(f, ḟ, a, φ)` with the spectrum held at `draw`.
pub fn fixed_spectrum_sampler(
    data: &TimeSeries,
    draw: &SpectrumDraw,
    signal_prior: &ChirpPrior,
    settings: &SamplerSettings,
) -> Result<ChirpRun> {
    check_setup(data, draw.grid(), signal_prior, settings)?;
    let scorer = Scorer::Known { inv_two_sigma2: draw.sigma2().iter().map(|s| 0.5 / s).collect() };
    let (_, chain, init, proposal) = run_metropolis(data, scorer, signal_prior, settings)?;
    let samples = chain
        .samples
        .iter()
        .map(|s| PosteriorSample {
            iteration: s.iteration,
            signal: Some(to_params(&s.params)),
            noise: None,
            log_target: s.log_target,
        })
        .collect();
    Ok(ChirpRun { samples, init, acceptance_rate: chain.acceptance_rate(), non_finite: chain.non_finite, proposal })
}

/// Gibbs sampler for a white spectrum `σ_j² ≡ σ²` of unknown level.
///
/// Each iteration makes one Metropolis move on the signal parameters given
/// `σ²`, then draws `σ²` exactly from
/// `Inv-χ²(ν + N, (νs² + Σ_j (a_j² + b_j²))/(ν + N))` given the residual.
/// The proposal is tuned beforehand with `σ²` frozen at a draw given the
/// starting residual. Recorded `log_target` is the joint log density up to a
/// constant, with the prior on `σ²` taken as the kernel
/// `(σ²)^{-(1+ν/2)} exp(-νs²/(2σ²))`.
pub fn gibbs_white_noise(
    data: &TimeSeries,
    noise_prior: &InvChiSqParams,
    signal_prior: &ChirpPrior,
    settings: &SamplerSettings,
) -> Result<ChirpRun> {
    let grid = data.grid();
    check_setup(data, &grid, signal_prior, settings)?;
    let n = grid.n();
    let nu = noise_prior.nu();
    let nu_s2 = nu * noise_prior.s2();
    let mut residual = Residual::new(data)?;
    let ranker = Scorer::PooledWhite { nu_s2, half_total: 0.5 * (nu + n as f64) };
    let init = initial_point(&mut residual, &ranker, signal_prior, settings)?;
    let start = init.as_array();

    let draw_sigma2 = |total: f64, rng: &mut rand_chacha::ChaCha20Rng| -> Result<f64> {
        let post = pooled_white_posterior(noise_prior, n, total)?;
        Ok(InvChiSqSampler::new(&post)?.sample(rng))
    };
    let total_power = |residual: &mut Residual, x: &[f64]| residual.powers(x).iter().sum::<f64>();

    let mut tuning_rng = chain_rng(settings.chain.seed, STREAM_TUNING);
    let mut sigma2 = draw_sigma2(total_power(&mut residual, &start), &mut tuning_rng)?;

    let lp0 = signal_prior.log_density(&start);
    let q0 = total_power(&mut residual, &start);
    let proposal = Proposal::diagonal(&settings.chain.proposal_scales)?.with_periods(&PERIODS)?;
    let mut walker = RandomWalk::new(proposal, start.to_vec(), -q0 / (2.0 * sigma2) + lp0)?;
    {
        let frozen = sigma2;
        let mut target = |x: &[f64]| {
            let lp = signal_prior.log_density(x);
            if !lp.is_finite() {
                return f64::NEG_INFINITY;
            }
            -total_power(&mut residual, x) / (2.0 * frozen) + lp
        };
        tune_proposal(&mut target, &mut walker, &settings.tuning, &mut tuning_rng)?;
    }

    let config = &settings.chain;
    let mut rng = chain_rng(config.seed, STREAM_MAIN);
    let mut samples = Vec::with_capacity(config.recorded());
    for step in 0..config.iterations {
        let current = sigma2;
        let mut target = |x: &[f64]| {
            let lp = signal_prior.log_density(x);
            if !lp.is_finite() {
                return f64::NEG_INFINITY;
            }
            -total_power(&mut residual, x) / (2.0 * current) + lp
        };
        walker.step(&mut target, &mut rng);
        let lp = signal_prior.log_density(walker.state());
        let total = -2.0 * current * (walker.log_target() - lp);
        let total = total.max(0.0);
        sigma2 = draw_sigma2(total, &mut rng)?;
        walker.set_log_target(-total / (2.0 * sigma2) + lp)?;
        if step >= config.burn_in && (step - config.burn_in) % config.thinning == 0 {
            let joint = -0.5 * n as f64 * sigma2.ln() - total / (2.0 * sigma2) + lp
                - (1.0 + 0.5 * nu) * sigma2.ln()
                - nu_s2 / (2.0 * sigma2);
            samples.push(PosteriorSample {
                iteration: step,
                signal: Some(to_params(walker.state())),
                noise: Some(SpectrumDraw::flat(sigma2, grid)?),
                log_target: joint,
            });
        }
    }
    Ok(ChirpRun {
        samples,
        init,
        acceptance_rate: walker.acceptance_rate(),
        non_finite: walker.non_finite(),
        proposal: walker.proposal().clone(),
    })
}

/// Dispatches to the sampler for `noise`.
pub fn run_chirp_sampler(
    data: &TimeSeries,
    noise: &NoiseModel,
    signal_prior: &ChirpPrior,
    settings: &SamplerSettings,
) -> Result<ChirpRun> {
    match noise {
        NoiseModel::MarginalT(prior) => marginal_signal_sampler(data, prior, signal_prior, settings),
        NoiseModel::FixedSpectrum(draw) => fixed_spectrum_sampler(data, draw, signal_prior, settings),
        NoiseModel::WhiteUnknown(prior) => gibbs_white_noise(data, prior, signal_prior, settings),
    }
}

/// Log target used by the marginal sampler, for external checks.
pub fn marginal_log_target(
    data: &TimeSeries,
    prior: &SpectrumPrior,
    signal_prior: &ChirpPrior,
    params: &ChirpParams,
) -> Result<f64> {
    data.grid().ensure_same(prior.grid())?;
    let scorer = student_scorer(prior)?;
    let mut residual = Residual::new(data)?;
    let x = params.as_array();
    Ok(scorer.score(residual.powers(&x)) + signal_prior.log_density(&x))
}
