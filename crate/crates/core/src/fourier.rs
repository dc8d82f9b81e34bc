//! Discrete Fourier transform and the real coefficient representation.
//!
//! Conventions: sample `k` (zero based) sits at time `t_k = k·Δt`, the forward
//! transform is the unscaled sum `x̃_j = Σ_k x_k exp(-2πi·jk/N)` and the
//! inverse carries the `1/N`. Real coefficients follow
//! `a_j = κ_j √(Δt/N) Re x̃_j`, `b_j = -κ_j √(Δt/N) Im x̃_j`, which makes
//!
//! ```text
//! x_k = 1/√(NΔt) Σ_j [a_j cos(2π f_j t_k) + b_j sin(2π f_j t_k)],   j = 0..⌊N/2⌋
//! ```
//!
//! with `κ_j` the number of non-degenerate coefficients in bin `j`.

use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Real samples at uniform spacing `dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    samples: Vec<f64>,
    dt: f64,
}

impl TimeSeries {
    pub fn new(samples: Vec<f64>, dt: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::TooFewSamples(samples.len()));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidInterval(dt));
        }
        if let Some(index) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(Self { samples, dt })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Time of sample `k`.
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |k| self.time(k))
    }

    pub fn grid(&self) -> FourierGrid {
        FourierGrid { n: self.len(), dt: self.dt }
    }

    /// Circular shift by `shift` samples: `y_k = x_{(k - shift) mod N}`.
    pub fn circular_shift(&self, shift: usize) -> Self {
        let n = self.len();
        let samples = (0..n).map(|k| self.samples[(k + n - shift % n) % n]).collect();
        Self { samples, dt: self.dt }
    }

    /// Sample-wise difference `self - other`.
    pub fn residual(&self, other: &[f64]) -> Result<Self> {
        if other.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), actual: other.len() });
        }
        let samples = self.samples.iter().zip(other).map(|(x, g)| x - g).collect();
        Self::new(samples, self.dt)
    }
}

/// Fourier frequencies `f_j = j/(NΔt)` for `j = 0..=⌊N/2⌋` and their
/// multiplicities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierGrid {
    n: usize,
    dt: f64,
}

impl FourierGrid {
    pub fn new(n: usize, dt: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewSamples(n));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidInterval(dt));
        }
        Ok(Self { n, dt })
    }

    /// Sample count `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Frequency resolution `Δf = 1/(NΔt)`.
    pub fn df(&self) -> f64 {
        1.0 / (self.n as f64 * self.dt)
    }

    /// Number of bins, `⌊N/2⌋ + 1`.
    pub fn bins(&self) -> usize {
        self.n / 2 + 1
    }

    pub fn last_bin(&self) -> usize {
        self.n / 2
    }

    pub fn frequency(&self, j: usize) -> f64 {
        j as f64 * self.df()
    }

    /// `κ_j` for an in-range bin; use [`kappa`] for checked access.
    pub fn kappa(&self, j: usize) -> u32 {
        if j == 0 || (self.n % 2 == 0 && j == self.n / 2) {
            1
        } else {
            2
        }
    }

    pub fn kappas(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.bins()).map(move |j| self.kappa(j))
    }

    pub(crate) fn same_as(&self, other: &FourierGrid) -> bool {
        self.n == other.n && (self.dt - other.dt).abs() <= 1e-12 * self.dt
    }

    pub(crate) fn ensure_same(&self, other: &FourierGrid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// Checked `κ_j` for bin `j` of an `n`-sample series.
pub fn kappa(j: usize, n: usize) -> Result<u32> {
    if n < 2 {
        return Err(Error::TooFewSamples(n));
    }
    if j > n / 2 {
        return Err(Error::BinOutOfRange { index: j, max: n / 2 });
    }
    Ok(FourierGrid { n, dt: 1.0 }.kappa(j))
}

/// Twiddle table for repeated length-`N` transforms.
///
/// Entry `m` holds `exp(-2πi·m/N)`; the product index `jk` is reduced modulo
/// `N` so every term uses an exactly tabulated root of unity.
#[derive(Debug, Clone)]
pub struct DftPlan {
    n: usize,
    roots: Vec<Complex64>,
}

impl DftPlan {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        let roots = (0..n)
            .map(|m| {
                let angle = 2.0 * PI * m as f64 / n as f64;
                Complex64::new(angle.cos(), -angle.sin())
            })
            .collect();
        Ok(Self { n, roots })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.n {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected: self.n, actual: len })
        }
    }

    /// Forward transform of real input, frequencies `0..count`.
    fn forward_partial(&self, x: &[f64], count: usize, out: &mut Vec<Complex64>) {
        let n = self.n;
        out.clear();
        for j in 0..count {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = 0usize;
            for &xk in x {
                acc += self.roots[idx] * xk;
                idx += j;
                if idx >= n {
                    idx -= n;
                }
            }
            out.push(acc);
        }
    }

    /// Full forward transform `x̃_0..x̃_{N-1}`.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<Complex64>> {
        self.check_len(x.len())?;
        if let Some(index) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        let mut out = Vec::with_capacity(self.n);
        self.forward_partial(x, self.n, &mut out);
        Ok(out)
    }

    /// Inverse transform `h_k = (1/N) Σ_j x̃_j exp(2πi·jk/N)`.
    pub fn inverse(&self, spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(spectrum.len())?;
        let n = self.n;
        let scale = 1.0 / n as f64;
        Ok((0..n)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut idx = 0usize;
                for value in spectrum {
                    acc += value * self.roots[idx].conj();
                    idx += k;
                    if idx >= n {
                        idx -= n;
                    }
                }
                acc * scale
            })
            .collect())
    }

    /// Real coefficients of `x`, reusing `scratch` between calls.
    ///
    /// Skips the finiteness scan; callers feeding model residuals in a hot
    /// loop are expected to pass finite data.
    pub fn coefficients_into(
        &self,
        x: &[f64],
        dt: f64,
        scratch: &mut Vec<Complex64>,
        a: &mut Vec<f64>,
        b: &mut Vec<f64>,
    ) {
        let n = self.n;
        let bins = n / 2 + 1;
        self.forward_partial(x, bins, scratch);
        let root = (dt / n as f64).sqrt();
        a.clear();
        b.clear();
        for (j, value) in scratch.iter().enumerate() {
            let kappa = if j == 0 || (n % 2 == 0 && j == n / 2) { 1.0 } else { 2.0 };
            a.push(kappa * root * value.re);
            // imaginary parts at DC and Nyquist vanish analytically
            b.push(if kappa == 1.0 { 0.0 } else { -kappa * root * value.im });
        }
    }

    /// Power `a_j² + b_j²` per bin of `x`, reusing `scratch`.
    pub fn powers_into(&self, x: &[f64], dt: f64, scratch: &mut Vec<Complex64>, power: &mut Vec<f64>) {
        let n = self.n;
        let bins = n / 2 + 1;
        self.forward_partial(x, bins, scratch);
        let factor = dt / n as f64;
        power.clear();
        for (j, value) in scratch.iter().enumerate() {
            let kappa = if j == 0 || (n % 2 == 0 && j == n / 2) { 1.0 } else { 2.0 };
            let norm = if kappa == 1.0 { value.re * value.re } else { value.norm_sqr() };
            power.push(kappa * kappa * factor * norm);
        }
    }

    /// `x_k = 1/√(NΔt) Σ_j [a_j cos(2π jk/N) + b_j sin(2π jk/N)]`.
    pub(crate) fn synthesize(&self, a: &[f64], b: &[f64], dt: f64) -> Vec<f64> {
        let n = self.n;
        let scale = 1.0 / (n as f64 * dt).sqrt();
        (0..n)
            .map(|k| {
                let mut acc = 0.0;
                let mut idx = 0usize;
                for (aj, bj) in a.iter().zip(b) {
                    let w = self.roots[idx];
                    acc += aj * w.re - bj * w.im;
                    idx += k;
                    if idx >= n {
                        idx -= n;
                    }
                }
                acc * scale
            })
            .collect()
    }
}

/// Forward transform `x̃_j = Σ_k x_k exp(-2πi·jk/N)` of a real sequence.
pub fn dft(samples: &[f64]) -> Result<Vec<Complex64>> {
    DftPlan::new(samples.len())?.forward(samples)
}

/// Inverse transform; returns the real parts (the input of a real series is
/// conjugate symmetric, so imaginary parts vanish up to rounding).
pub fn inverse_dft(spectrum: &[Complex64]) -> Result<Vec<f64>> {
    let plan = DftPlan::new(spectrum.len())?;
    Ok(plan.inverse(spectrum)?.into_iter().map(|c| c.re).collect())
}

/// Real Fourier coefficients `(a_j, b_j)`, `j = 0..=⌊N/2⌋`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    a: Vec<f64>,
    b: Vec<f64>,
    grid: FourierGrid,
}

impl FourierCoefficients {
    /// Checks lengths and that the by-definition-zero sine terms are zero.
    pub fn new(a: Vec<f64>, b: Vec<f64>, grid: FourierGrid) -> Result<Self> {
        let bins = grid.bins();
        for len in [a.len(), b.len()] {
            if len != bins {
                return Err(Error::LengthMismatch { expected: bins, actual: len });
            }
        }
        for j in 0..bins {
            if grid.kappa(j) == 1 && b[j] != 0.0 {
                return Err(Error::NonZeroSineTerm { index: j, value: b[j] });
            }
        }
        if let Some(index) = a.iter().chain(&b).position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index: index % bins });
        }
        Ok(Self { a, b, grid })
    }

    pub fn zeros(grid: FourierGrid) -> Self {
        let bins = grid.bins();
        Self { a: alloc::vec![0.0; bins], b: alloc::vec![0.0; bins], grid }
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn grid(&self) -> &FourierGrid {
        &self.grid
    }

    /// `a_j² + b_j²`.
    pub fn power(&self, j: usize) -> f64 {
        self.a[j] * self.a[j] + self.b[j] * self.b[j]
    }

    pub fn powers(&self) -> impl Iterator<Item = f64> + '_ {
        self.a.iter().zip(&self.b).map(|(a, b)| a * a + b * b)
    }

    /// Energy `Σ_j (a_j² + b_j²)/κ_j`, equal to `Δt Σ_k x_k²`.
    pub fn energy(&self) -> f64 {
        self.powers().zip(self.grid.kappas()).map(|(p, k)| p / k as f64).sum()
    }
}

/// Maps a time series onto its real Fourier coefficients.
pub fn to_coefficients(ts: &TimeSeries) -> FourierCoefficients {
    let grid = ts.grid();
    let plan = DftPlan::new(ts.len()).expect("validated series is non-empty");
    let mut scratch = Vec::new();
    let (mut a, mut b) = (Vec::new(), Vec::new());
    plan.coefficients_into(ts.samples(), ts.dt(), &mut scratch, &mut a, &mut b);
    FourierCoefficients { a, b, grid }
}

/// Synthesizes the time series described by `fc`.
pub fn from_coefficients(fc: &FourierCoefficients) -> TimeSeries {
    let grid = fc.grid;
    let plan = DftPlan::new(grid.n()).expect("grid has at least two samples");
    let samples = plan.synthesize(&fc.a, &fc.b, grid.dt());
    TimeSeries { samples, dt: grid.dt() }
}

/// One-sided (`p1`) and two-sided (`p2`) empirical power per bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram {
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub grid: FourierGrid,
}

pub fn periodogram(fc: &FourierCoefficients) -> Periodogram {
    let (p1, p2) = fc
        .powers()
        .zip(fc.grid.kappas())
        .map(|(p, k)| {
            let k = k as f64;
            (p / k, p / (k * k))
        })
        .unzip();
    Periodogram { p1, p2, grid: fc.grid }
}

/// Amplitude/phase form `x_k = 1/√(NΔt) Σ_j λ_j sin(2π f_j t_k + φ_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudePhase {
    pub lambda: Vec<f64>,
    pub phi: Vec<f64>,
}

impl AmplitudePhase {
    /// Evaluates the sine-form synthesis on the given grid.
    pub fn synthesize(&self, grid: &FourierGrid) -> Vec<f64> {
        let n = grid.n();
        let scale = 1.0 / (n as f64 * grid.dt()).sqrt();
        (0..n)
            .map(|k| {
                self.lambda
                    .iter()
                    .zip(&self.phi)
                    .enumerate()
                    .map(|(j, (l, p))| {
                        let angle = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
                        l * (angle + p).sin()
                    })
                    .sum::<f64>()
                    * scale
            })
            .collect()
    }
}

/// Converts `(a_j, b_j)` into amplitude and phase.
///
/// `λ sin(θ + φ) = λ cos φ sin θ + λ sin φ cos θ` matches `a cos θ + b sin θ`
/// when `λ sin φ = a` and `λ cos φ = b`, so `φ = atan2(a, b)`, reported in
/// `(-π, π]`. A zero pair gets phase 0.
pub fn amplitude_phase(fc: &FourierCoefficients) -> AmplitudePhase {
    let (lambda, phi) = fc
        .a
        .iter()
        .zip(&fc.b)
        .map(|(&a, &b)| {
            let lambda = (a * a + b * b).sqrt();
            let mut phi = if lambda == 0.0 { 0.0 } else { a.atan2(b) };
            if phi <= -PI {
                phi += 2.0 * PI;
            }
            (lambda, phi)
        })
        .unzip();
    AmplitudePhase { lambda, phi }
}
