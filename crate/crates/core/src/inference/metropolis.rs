//! Random-walk Metropolis with Gaussian proposals, optional periodic
//! coordinates and a finite adaptive pre-phase.

use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Length, burn-in, thinning and seed of a recorded chain.
///
/// `iterations` counts every Metropolis step after tuning, burn-in included;
/// the chain keeps step `i` when `i ≥ burn_in` and `(i - burn_in) % thinning == 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    pub iterations: usize,
    pub burn_in: usize,
    pub thinning: usize,
    pub seed: u64,
    pub proposal_scales: Vec<f64>,
}

impl ChainConfig {
    pub fn new(
        iterations: usize,
        burn_in: usize,
        thinning: usize,
        seed: u64,
        proposal_scales: Vec<f64>,
    ) -> Result<Self> {
        let config = Self { iterations, burn_in, thinning, seed, proposal_scales };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidChainConfig("iterations must be positive"));
        }
        if self.burn_in >= self.iterations {
            return Err(Error::InvalidChainConfig("burn-in must be smaller than iterations"));
        }
        if self.thinning == 0 {
            return Err(Error::InvalidChainConfig("thinning must be positive"));
        }
        if self.proposal_scales.is_empty() {
            return Err(Error::InvalidChainConfig("no proposal scales"));
        }
        if self.proposal_scales.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
            return Err(Error::InvalidChainConfig("proposal scales must be finite and non-negative"));
        }
        Ok(())
    }

    /// Number of retained samples.
    pub fn recorded(&self) -> usize {
        (self.iterations - self.burn_in).div_ceil(self.thinning)
    }

    fn keeps(&self, step: usize) -> bool {
        step >= self.burn_in && (step - self.burn_in) % self.thinning == 0
    }
}

/// Gaussian random-walk proposal `x' = x + L z`, `z ~ N(0, I)`, with `L`
/// lower triangular. Coordinates with a period are wrapped into `[0, period)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Proposal {
    dim: usize,
    factor: Vec<f64>,
    periods: Vec<Option<f64>>,
}

impl Proposal {
    /// Independent steps with the given standard deviations.
    pub fn diagonal(scales: &[f64]) -> Result<Self> {
        if scales.is_empty() {
            return Err(Error::InvalidChainConfig("no proposal scales"));
        }
        if scales.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
            return Err(Error::InvalidChainConfig("proposal scales must be finite and non-negative"));
        }
        let dim = scales.len();
        let mut factor = vec![0.0; dim * dim];
        for (i, s) in scales.iter().enumerate() {
            factor[i * dim + i] = *s;
        }
        Ok(Self { dim, factor, periods: vec![None; dim] })
    }

    /// Correlated steps with covariance `scale² · cov` (row-major `dim × dim`).
    ///
    /// A covariance that is not numerically positive definite gets a growing
    /// diagonal jitter; if that fails the diagonal alone is used.
    pub fn from_covariance(cov: &[f64], dim: usize, scale: f64) -> Result<Self> {
        if dim == 0 || cov.len() != dim * dim {
            return Err(Error::LengthMismatch { expected: dim * dim, actual: cov.len() });
        }
        if cov.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidChainConfig("covariance is not finite"));
        }
        let trace: f64 = (0..dim).map(|i| cov[i * dim + i]).sum();
        let mut jitter = 0.0;
        for _ in 0..8 {
            let mut work = cov.to_vec();
            for i in 0..dim {
                work[i * dim + i] += jitter;
            }
            if let Some(mut factor) = cholesky(&work, dim) {
                factor.iter_mut().for_each(|v| *v *= scale);
                return Ok(Self { dim, factor, periods: vec![None; dim] });
            }
            jitter = if jitter == 0.0 { 1e-12 * (trace / dim as f64).max(1e-300) } else { jitter * 100.0 };
        }
        let scales: Vec<f64> = (0..dim).map(|i| scale * cov[i * dim + i].max(0.0).sqrt()).collect();
        Self::diagonal(&scales)
    }

    pub fn with_periods(mut self, periods: &[Option<f64>]) -> Result<Self> {
        if periods.len() != self.dim {
            return Err(Error::LengthMismatch { expected: self.dim, actual: periods.len() });
        }
        if periods.iter().flatten().any(|p| !(*p > 0.0 && p.is_finite())) {
            return Err(Error::InvalidChainConfig("periods must be positive and finite"));
        }
        self.periods = periods.to_vec();
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn periods(&self) -> &[Option<f64>] {
        &self.periods
    }

    /// Lower-triangular factor in row-major order.
    pub fn factor(&self) -> &[f64] {
        &self.factor
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.factor.iter_mut().for_each(|v| *v *= c);
        out
    }

    /// Writes a proposal from `current` into `out`; `z` is scratch space.
    pub fn propose<R: Rng + ?Sized>(&self, current: &[f64], out: &mut Vec<f64>, z: &mut Vec<f64>, rng: &mut R) {
        let d = self.dim;
        z.clear();
        z.extend((0..d).map(|_| rng.sample::<f64, _>(StandardNormal)));
        out.clear();
        for i in 0..d {
            let row = &self.factor[i * d..i * d + i + 1];
            let step: f64 = row.iter().zip(z.iter()).map(|(l, zi)| l * zi).sum();
            let mut value = current[i] + step;
            if let Some(period) = self.periods[i] {
                value = wrap(value, period);
            }
            out.push(value);
        }
    }
}

pub(crate) fn wrap(value: f64, period: f64) -> f64 {
    let w = crate::signal::modulo(value, period);
    if w >= period {
        0.0
    } else {
        w
    }
}

/// Signed shortest difference `to - from` on a circle.
pub(crate) fn circular_delta(from: f64, to: f64, period: f64) -> f64 {
    let d = crate::signal::modulo(to - from, period);
    if d > 0.5 * period {
        d - period
    } else {
        d
    }
}

/// Lower Cholesky factor of a symmetric positive definite row-major matrix.
pub fn cholesky(matrix: &[f64], dim: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..=i {
            let mut sum = matrix[i * dim + j];
            for k in 0..j {
                sum -= l[i * dim + k] * l[j * dim + k];
            }
            if i == j {
                if !(sum > 0.0) || !sum.is_finite() {
                    return None;
                }
                l[i * dim + i] = sum.sqrt();
            } else {
                l[i * dim + j] = sum / l[j * dim + j];
            }
        }
    }
    Some(l)
}

/// State of one Metropolis walker.
#[derive(Debug, Clone)]
pub struct RandomWalk {
    proposal: Proposal,
    state: Vec<f64>,
    log_target: f64,
    candidate: Vec<f64>,
    z: Vec<f64>,
    proposed: u64,
    accepted: u64,
    non_finite: u64,
}

impl RandomWalk {
    pub fn new(proposal: Proposal, init: Vec<f64>, log_target: f64) -> Result<Self> {
        if init.len() != proposal.dim() {
            return Err(Error::LengthMismatch { expected: proposal.dim(), actual: init.len() });
        }
        if !log_target.is_finite() || init.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInitialState);
        }
        let mut state = init;
        for (v, p) in state.iter_mut().zip(proposal.periods()) {
            if let Some(p) = p {
                *v = wrap(*v, *p);
            }
        }
        Ok(Self {
            proposal,
            state,
            log_target,
            candidate: Vec::new(),
            z: Vec::new(),
            proposed: 0,
            accepted: 0,
            non_finite: 0,
        })
    }

    /// One Metropolis step; returns whether the proposal was accepted.
    /// Non-finite target values at a proposal count as rejections.
    pub fn step<F, R>(&mut self, target: &mut F, rng: &mut R) -> bool
    where
        F: FnMut(&[f64]) -> f64,
        R: Rng + ?Sized,
    {
        self.proposal.propose(&self.state, &mut self.candidate, &mut self.z, rng);
        self.proposed += 1;
        let value = target(&self.candidate);
        if !value.is_finite() {
            self.non_finite += 1;
            return false;
        }
        let u: f64 = rng.random();
        if u.ln() < value - self.log_target {
            core::mem::swap(&mut self.state, &mut self.candidate);
            self.log_target = value;
            self.accepted += 1;
            true
        } else {
            false
        }
    }

    pub fn state(&self) -> &[f64] {
        &self.state
    }

    pub fn log_target(&self) -> f64 {
        self.log_target
    }

    /// Replaces the cached target value, e.g. after a Gibbs update changed
    /// the conditioning variables.
    pub fn set_log_target(&mut self, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFiniteInitialState);
        }
        self.log_target = value;
        Ok(())
    }

    pub fn proposal(&self) -> &Proposal {
        &self.proposal
    }

    pub fn set_proposal(&mut self, proposal: Proposal) {
        self.proposal = proposal;
    }

    pub fn proposed(&self) -> u64 {
        self.proposed
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn non_finite(&self) -> u64 {
        self.non_finite
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    pub fn reset_counters(&mut self) {
        self.proposed = 0;
        self.accepted = 0;
        self.non_finite = 0;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainSample {
    pub iteration: usize,
    pub params: Vec<f64>,
    pub log_target: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub samples: Vec<ChainSample>,
    pub proposed: u64,
    pub accepted: u64,
    pub non_finite: u64,
}

impl Chain {
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    /// Values of one coordinate across the retained samples.
    pub fn column(&self, index: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s.params[index]).collect()
    }
}

/// Runs `walker` for `config.iterations` steps, recording per `config`.
pub fn run_chain<F, R>(target: &mut F, walker: &mut RandomWalk, config: &ChainConfig, rng: &mut R) -> Result<Chain>
where
    F: FnMut(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    config.validate()?;
    walker.reset_counters();
    let mut samples = Vec::with_capacity(config.recorded());
    for step in 0..config.iterations {
        walker.step(target, rng);
        if config.keeps(step) {
            samples.push(ChainSample {
                iteration: step,
                params: walker.state().to_vec(),
                log_target: walker.log_target(),
            });
        }
    }
    Ok(Chain {
        samples,
        proposed: walker.proposed(),
        accepted: walker.accepted(),
        non_finite: walker.non_finite(),
    })
}

/// Plain Metropolis with the diagonal proposal from `config.proposal_scales`
/// and an RNG seeded from `config.seed`.
pub fn metropolis<F>(mut target: F, init: Vec<f64>, config: &ChainConfig) -> Result<Chain>
where
    F: FnMut(&[f64]) -> f64,
{
    config.validate()?;
    let proposal = Proposal::diagonal(&config.proposal_scales)?;
    let start = target(&init);
    let mut walker = RandomWalk::new(proposal, init, start)?;
    let mut rng = super::chain_rng(config.seed, super::STREAM_MAIN);
    run_chain(&mut target, &mut walker, config, &mut rng)
}

/// Adaptive pre-phase settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuningConfig {
    /// Total steps spent tuning; zero disables tuning.
    pub iterations: usize,
    /// Steps between scale adjustments.
    pub batch: usize,
    pub target_low: f64,
    pub target_high: f64,
}

impl Default for TuningConfig {
    fn default() -> Self {
        Self { iterations: 20_000, batch: 100, target_low: 0.2, target_high: 0.4 }
    }
}

impl TuningConfig {
    pub fn disabled() -> Self {
        Self { iterations: 0, ..Self::default() }
    }
}

/// Adapts `walker`'s proposal and then freezes it.
///
/// Three equal stages: the initial proposal with a scalar step-size search,
/// then twice a Gaussian proposal shaped by the empirical covariance of the
/// previous stage (factor `2.38²/d`), again with a scalar search. The scalar
/// moves by a fixed factor after every batch whose acceptance falls outside
/// `[target_low, target_high]`.
pub fn tune_proposal<F, R>(target: &mut F, walker: &mut RandomWalk, tuning: &TuningConfig, rng: &mut R) -> Result<()>
where
    F: FnMut(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    if tuning.iterations == 0 {
        return Ok(());
    }
    if tuning.batch == 0 || !(tuning.target_low < tuning.target_high) {
        return Err(Error::InvalidChainConfig("invalid tuning settings"));
    }
    let dim = walker.proposal().dim();
    let periods = walker.proposal().periods().to_vec();
    let stage_len = (tuning.iterations / 3).max(tuning.batch);
    let mut base = walker.proposal().clone();
    let mut scale = 1.0;
    for stage in 0..3 {
        let mut track = Tracker::new(walker.state(), &periods);
        let mut done = 0;
        while done < stage_len {
            let steps = tuning.batch.min(stage_len - done);
            let mut accepted = 0;
            for _ in 0..steps {
                if walker.step(target, rng) {
                    accepted += 1;
                }
                track.push(walker.state());
            }
            done += steps;
            let rate = accepted as f64 / steps as f64;
            if rate < tuning.target_low {
                scale *= 0.7;
            } else if rate > tuning.target_high {
                scale *= 1.4;
            }
            walker.set_proposal(base.scaled(scale));
        }
        if stage < 2 {
            if let Some(cov) = track.covariance() {
                let shaped = Proposal::from_covariance(&cov, dim, 2.38 / (dim as f64).sqrt())?
                    .with_periods(&periods)?;
                base = shaped;
                scale = 1.0;
                walker.set_proposal(base.clone());
            }
        }
    }
    walker.reset_counters();
    Ok(())
}

/// Running sums of an unwrapped trajectory for covariance estimation.
struct Tracker<'a> {
    periods: &'a [Option<f64>],
    origin: Vec<f64>,
    last: Vec<f64>,
    unwrapped: Vec<f64>,
    sum: Vec<f64>,
    outer: Vec<f64>,
    count: usize,
}

impl<'a> Tracker<'a> {
    fn new(start: &[f64], periods: &'a [Option<f64>]) -> Self {
        let d = start.len();
        Self {
            periods,
            origin: start.to_vec(),
            last: start.to_vec(),
            unwrapped: start.to_vec(),
            sum: vec![0.0; d],
            outer: vec![0.0; d * d],
            count: 0,
        }
    }

    fn push(&mut self, state: &[f64]) {
        let d = state.len();
        for i in 0..d {
            let delta = match self.periods[i] {
                Some(p) => circular_delta(self.last[i], state[i], p),
                None => state[i] - self.last[i],
            };
            self.unwrapped[i] += delta;
            self.last[i] = state[i];
        }
        // offsets from the stage start limit cancellation in the sums
        for i in 0..d {
            let xi = self.unwrapped[i] - self.origin[i];
            self.sum[i] += xi;
            for j in 0..=i {
                self.outer[i * d + j] += xi * (self.unwrapped[j] - self.origin[j]);
            }
        }
        self.count += 1;
    }

    fn covariance(&self) -> Option<Vec<f64>> {
        if self.count < 2 {
            return None;
        }
        let d = self.sum.len();
        let n = self.count as f64;
        let mut cov = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..=i {
                let c = (self.outer[i * d + j] - self.sum[i] * self.sum[j] / n) / (n - 1.0);
                cov[i * d + j] = c;
                cov[j * d + i] = c;
            }
        }
        let degenerate = (0..d).any(|i| !(cov[i * d + i] > 0.0));
        (!degenerate).then_some(cov)
    }
}
