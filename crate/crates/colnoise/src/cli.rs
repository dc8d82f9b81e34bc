//! Command line definitions and the five commands.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use colnoise_core::fourier::to_coefficients;
use colnoise_core::inference::{
    chain_rng, monte_carlo_autocovariance, run_chirp_sampler, ChainConfig, ChirpPrior, ChirpRun, NoiseModel,
    ParameterSummary, SamplerSettings, TuningConfig, STREAM_MAIN,
};
use colnoise_core::signal::{amplitude_for_snr, ar1_spectrum_draw, chirp, generate_ar1, snr};
use colnoise_core::spectrum::{
    autocovariance_moments, elicit_band_prior, elicit_white_prior, white_prior_with_dof,
};
use colnoise_core::{Ar1Config, ChirpParams, FourierGrid, SpectrumPrior, TimeSeries, WhitePriorTarget};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{CliError, Result};
use crate::format::{
    f17, parse_bands, parse_prior, parse_series, parse_spectrum, prior_json, read_text, series_csv, spectrum_csv,
    to_json, PosteriorFile, Table,
};
use crate::manifest::OutputSet;
use crate::presets::{Preset, DEFAULT_AR, DEFAULT_CHIRP, DEFAULT_WHITE_PRIOR};

#[derive(Debug, Parser)]
#[command(name = "colnoise", version, about = "Bayesian inference for signals in coloured noise of uncertain spectrum")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate AR(1) noise, optionally with a chirp added.
    SimulateNoise(SimulateArgs),
    /// Write a spectrum prior.
    Elicit(ElicitArgs),
    /// Conjugate spectrum posterior of a noise series.
    NoisePosterior(NoisePosteriorArgs),
    /// Sample the chirp parameters under one of three noise models.
    Mcmc(McmcArgs),
    /// Monte Carlo summaries of the autocovariance under a posterior.
    Autocov(AutocovArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub ar_coeff: Option<f64>,
    /// Innovations are uniform on [-h, h].
    #[arg(long)]
    pub innovation_half_width: Option<f64>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the theoretical AR(1) spectrum as `f,sigma2`.
    #[arg(long)]
    pub spectrum_out: Option<PathBuf>,
    /// Also write the injected chirp parameters as JSON.
    #[arg(long)]
    pub truth_out: Option<PathBuf>,
    #[arg(long)]
    pub chirp_f: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub chirp_fdot: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub chirp_phi: Option<f64>,
    #[arg(long, conflicts_with = "snr")]
    pub chirp_a: Option<f64>,
    /// Scale the chirp to this SNR against the theoretical spectrum.
    #[arg(long)]
    pub snr: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ElicitArgs {
    #[arg(long)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Same `(ν, s²)` in every bin.
    #[arg(long)]
    pub white: bool,
    /// Prior expectation of the variance (full-band power).
    #[arg(long)]
    pub target_var: Option<f64>,
    #[arg(long, conflicts_with = "cv")]
    pub nu: Option<f64>,
    /// Prior variation coefficient of the full-band power.
    #[arg(long)]
    pub cv: Option<f64>,
    #[arg(long, conflicts_with_all = ["white", "bands", "target_var", "nu", "cv"])]
    pub jeffreys: bool,
    /// CSV `f1,f2,mean,var` of band power targets.
    #[arg(long, conflicts_with_all = ["white", "target_var", "nu", "cv"])]
    pub bands: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct NoisePosteriorArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub prior: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Per-bin posterior densities on a variance grid, `bin,f,sigma2,density`.
    #[arg(long)]
    pub density_out: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    pub density_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Chirp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseMode {
    /// Per-bin variances integrated out against the prior.
    MarginalT,
    /// Variances fixed at the `--spectrum` file.
    FixedSpectrum,
    /// One unknown variance for all bins, sampled by Gibbs.
    WhiteUnknown,
}

impl NoiseMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::MarginalT => "marginal-t",
            Self::FixedSpectrum => "fixed-spectrum",
            Self::WhiteUnknown => "white-unknown",
        }
    }
}

#[derive(Debug, Args)]
pub struct McmcArgs {
    #[arg(long)]
    pub preset: Option<Preset>,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Required by `marginal-t` and `white-unknown`.
    #[arg(long)]
    pub prior: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Model::Chirp)]
    pub model: Model,
    #[arg(long, value_enum)]
    pub noise_mode: NoiseMode,
    /// `f,sigma2` file for `fixed-spectrum`.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    #[arg(long)]
    pub thin: Option<usize>,
    #[arg(long)]
    pub seed: u64,
    /// Adaptive steps before the recorded chain; 0 disables tuning.
    #[arg(long)]
    pub tune_iters: Option<usize>,
    /// Initial proposal sd for f, fdot, a, phi.
    #[arg(long, value_delimiter = ',', num_args = 4)]
    pub proposal_scales: Option<Vec<f64>>,
    /// Attach a conditional spectrum draw to every sample (`marginal-t`).
    #[arg(long)]
    pub augment_noise: bool,
    #[arg(long)]
    pub f_min: Option<f64>,
    #[arg(long)]
    pub f_max: Option<f64>,
    #[arg(long)]
    pub a_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub fdot_mean: Option<f64>,
    #[arg(long)]
    pub fdot_sd: Option<f64>,
    /// Chain CSV `iter,f,fdot,a,phi,log_target[,sigma2_0..]`.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub summary_out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AutocovArgs {
    #[arg(long)]
    pub posterior: PathBuf,
    #[arg(long)]
    pub draws: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "0.025,0.5,0.975")]
    pub quantiles: Vec<f64>,
    /// Per-lag CSV.
    #[arg(long)]
    pub out: PathBuf,
}

/// Runs one parsed command; `command_line` is recorded in the manifest.
pub fn run(cli: Cli, command_line: Vec<String>) -> Result<PathBuf> {
    let (outputs, seed, config) = match cli.command {
        Command::SimulateNoise(args) => simulate_noise(&args)?,
        Command::Elicit(args) => elicit(&args)?,
        Command::NoisePosterior(args) => noise_posterior(&args)?,
        Command::Mcmc(args) => mcmc(&args)?,
        Command::Autocov(args) => autocov(&args)?,
    };
    outputs.commit(command_line, seed, config)
}

type Planned = (OutputSet, Option<u64>, serde_json::Value);

fn positive(name: &str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::usage(format!("--{name} must be positive, got {value}")))
    }
}

/// Injected chirp parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truth {
    #[serde(serialize_with = "f17::serialize")]
    pub f: f64,
    #[serde(serialize_with = "f17::serialize")]
    pub fdot: f64,
    #[serde(serialize_with = "f17::serialize")]
    pub a: f64,
    #[serde(serialize_with = "f17::serialize")]
    pub phi: f64,
    #[serde(serialize_with = "f17::serialize")]
    pub snr: f64,
}

fn simulate_noise(args: &SimulateArgs) -> Result<Planned> {
    let n = args.n.unwrap_or(DEFAULT_AR.n);
    let dt = positive("dt", args.dt.unwrap_or(DEFAULT_AR.dt))?;
    let coeff = args.ar_coeff.unwrap_or(DEFAULT_AR.coefficient);
    let h = positive("innovation-half-width", args.innovation_half_width.unwrap_or(DEFAULT_AR.innovation_half_width))?;
    let config = Ar1Config::new(coeff, h, n, dt).map_err(|e| CliError::usage(e.to_string()))?;
    let grid = config.grid();
    let draw = ar1_spectrum_draw(&config, &grid);

    let preset_chirp = (args.preset == Some(Preset::ChirpStudy)).then_some(DEFAULT_CHIRP);
    let any_chirp_flag = args.chirp_f.is_some()
        || args.chirp_fdot.is_some()
        || args.chirp_phi.is_some()
        || args.chirp_a.is_some()
        || args.snr.is_some();
    let chirp_request = if preset_chirp.is_some() || any_chirp_flag {
        let base = preset_chirp;
        let pick = |flag: Option<f64>, preset: Option<f64>, name: &str| {
            flag.or(preset).ok_or_else(|| CliError::usage(format!("a chirp needs --{name}")))
        };
        let f = pick(args.chirp_f, base.map(|c| c.f), "chirp-f")?;
        let fdot = pick(args.chirp_fdot, base.map(|c| c.fdot), "chirp-fdot")?;
        let phi = pick(args.chirp_phi, base.map(|c| c.phi), "chirp-phi")?;
        let params = ChirpParams::new(f, fdot, 1.0, phi).map_err(|e| CliError::usage(e.to_string()))?;
        let a = match (args.chirp_a, args.snr.or(if args.chirp_a.is_none() { base.map(|c| c.snr) } else { None })) {
            (Some(a), _) => a,
            (None, Some(target)) => amplitude_for_snr(&params, &draw, target)?,
            (None, None) => return Err(CliError::usage("a chirp needs --chirp-a or --snr")),
        };
        let params = ChirpParams::new(f, fdot, a, phi).map_err(|e| CliError::usage(e.to_string()))?;
        Some(params)
    } else {
        None
    };

    let mut rng = chain_rng(args.seed, STREAM_MAIN);
    let noise = generate_ar1(&config, &mut rng);
    let (data, truth) = match chirp_request {
        Some(params) => {
            let signal = chirp(&params, n, dt);
            let rho = snr(&TimeSeries::new(signal.clone(), dt)?, &draw)?.rho();
            let samples = noise.samples().iter().zip(&signal).map(|(x, g)| x + g).collect();
            let truth = Truth { f: params.f, fdot: params.fdot, a: params.a, phi: params.phi, snr: rho };
            (TimeSeries::new(samples, dt)?, Some(truth))
        }
        None => (noise, None),
    };

    let mut outputs = OutputSet::default();
    outputs.add(args.out.clone(), series_csv(&data));
    if let Some(path) = &args.spectrum_out {
        outputs.add(path.clone(), spectrum_csv(&draw));
    }
    if let Some(path) = &args.truth_out {
        let truth = truth.ok_or_else(|| CliError::usage("--truth-out needs a chirp"))?;
        outputs.add(path.clone(), to_json(&truth)?);
    }
    let config = json!({
        "command": "simulate-noise",
        "n": n, "dt": dt, "ar_coeff": coeff, "innovation_half_width": h,
        "chirp": truth.map(|t| json!({"f": t.f, "fdot": t.fdot, "a": t.a, "phi": t.phi, "snr": t.snr})),
    });
    Ok((outputs, Some(args.seed), config))
}

fn elicit(args: &ElicitArgs) -> Result<Planned> {
    let n = args.n.unwrap_or(DEFAULT_AR.n);
    let dt = positive("dt", args.dt.unwrap_or(DEFAULT_AR.dt))?;
    let grid = FourierGrid::new(n, dt).map_err(|e| CliError::usage(e.to_string()))?;
    let from_preset = args.preset == Some(Preset::NoiseStudy) && !args.jeffreys && args.bands.is_none();
    let white = args.white || from_preset;
    let (prior, config) = if args.jeffreys {
        (SpectrumPrior::jeffreys(grid), json!({"mode": "jeffreys"}))
    } else if let Some(path) = &args.bands {
        let targets = parse_bands(&read_text(path)?, path)?;
        let prior = elicit_band_prior(&targets, &grid)?;
        let bands: Vec<_> = targets
            .iter()
            .map(|t| json!({"f1": t.band.lower, "f2": t.band.upper, "mean": t.mean, "var": t.variance}))
            .collect();
        (prior, json!({"mode": "bands", "bands": bands}))
    } else if white {
        let target = args
            .target_var
            .or(from_preset.then_some(DEFAULT_WHITE_PRIOR.target_var))
            .ok_or_else(|| CliError::usage("--white needs --target-var"))?;
        let target = positive("target-var", target)?;
        match (args.nu, args.cv) {
            (_, Some(cv)) => {
                let prior = elicit_white_prior(
                    &WhitePriorTarget::new(target, cv).map_err(|e| CliError::usage(e.to_string()))?,
                    &grid,
                )?;
                (prior, json!({"mode": "white", "target_var": target, "cv": cv}))
            }
            (nu, None) => {
                let nu = nu
                    .or(from_preset.then_some(DEFAULT_WHITE_PRIOR.nu))
                    .ok_or_else(|| CliError::usage("--white needs --nu or --cv"))?;
                let prior = white_prior_with_dof(target, nu, &grid).map_err(|e| CliError::usage(e.to_string()))?;
                (prior, json!({"mode": "white", "target_var": target, "nu": nu}))
            }
        }
    } else {
        return Err(CliError::usage("choose one of --white, --jeffreys or --bands"));
    };
    let mut config = config;
    config["command"] = json!("elicit");
    config["n"] = json!(n);
    config["dt"] = json!(dt);
    let mut outputs = OutputSet::default();
    outputs.add(args.out.clone(), prior_json(&prior)?);
    Ok((outputs, None, config))
}

fn read_series(path: &Path) -> Result<TimeSeries> {
    parse_series(&read_text(path)?, path)
}

fn noise_posterior(args: &NoisePosteriorArgs) -> Result<Planned> {
    let data = read_series(&args.input)?;
    let grid = data.grid();
    let prior = parse_prior(&read_text(&args.prior)?, &args.prior, &grid)?;
    let posterior = prior.posterior_update(&to_coefficients(&data))?;
    let mut outputs = OutputSet::default();
    outputs.add(args.out.clone(), to_json(&PosteriorFile::from_prior(&posterior)?)?);
    if let Some(path) = &args.density_out {
        if args.density_points < 2 {
            return Err(CliError::usage("--density-points must be at least 2"));
        }
        outputs.add(path.clone(), density_table(&posterior, args.density_points)?.to_csv());
    }
    let config = json!({
        "command": "noise-posterior",
        "data": args.input.display().to_string(),
        "prior": args.prior.display().to_string(),
        "density_points": args.density_out.as_ref().map(|_| args.density_points),
    });
    Ok((outputs, None, config))
}

/// Log-spaced variance grid between the 0.1% and 99.9% posterior quantiles
/// of every proper bin.
fn density_table(posterior: &SpectrumPrior, points: usize) -> Result<Table> {
    let grid = posterior.grid();
    let mut table = Table::new(["bin", "f", "sigma2", "density"]);
    for (j, p) in posterior.bins().iter().enumerate() {
        if p.is_improper() {
            continue;
        }
        let (lo, hi) = (p.quantile(1e-3)?.ln(), p.quantile(1.0 - 1e-3)?.ln());
        for i in 0..points {
            let x = (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp();
            table.push(vec![j as f64, grid.frequency(j), x, p.density(x)?]);
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRecord {
    #[serde(serialize_with = "f17::serialize")]
    pub mean: f64,
    #[serde(serialize_with = "f17::serialize")]
    pub sd: f64,
    #[serde(serialize_with = "f17::serialize")]
    pub median: f64,
    /// 2.5% point.
    #[serde(serialize_with = "f17::serialize")]
    pub lower: f64,
    /// 97.5% point.
    #[serde(serialize_with = "f17::serialize")]
    pub upper: f64,
}

impl From<&ParameterSummary> for SummaryRecord {
    fn from(s: &ParameterSummary) -> Self {
        Self { mean: s.mean, sd: s.sd, median: s.median, lower: s.lower, upper: s.upper }
    }
}

impl SummaryRecord {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterRecords {
    pub f: SummaryRecord,
    pub fdot: SummaryRecord,
    pub a: SummaryRecord,
    /// Circular: the interval may extend below 0 or above 2π.
    pub phi: SummaryRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub iterations: usize,
    pub burn_in: usize,
    pub thinning: usize,
    pub seed: u64,
    #[serde(serialize_with = "f17::vec")]
    pub proposal_scales: Vec<f64>,
    pub tuning_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McmcSummary {
    pub model: String,
    pub noise_mode: NoiseMode,
    pub chain: ChainRecord,
    pub samples: usize,
    #[serde(serialize_with = "f17::serialize")]
    pub acceptance_rate: f64,
    pub non_finite: u64,
    #[serde(serialize_with = "f17::vec")]
    pub init: Vec<f64>,
    pub parameters: ParameterRecords,
}

fn chirp_prior(args: &McmcArgs) -> Result<ChirpPrior> {
    let d = ChirpPrior::default();
    ChirpPrior::new(
        args.f_min.unwrap_or(d.f_min),
        args.f_max.unwrap_or(d.f_max),
        d.a_min,
        args.a_max.unwrap_or(d.a_max),
        args.fdot_mean.unwrap_or(d.fdot_mean),
        args.fdot_sd.unwrap_or(d.fdot_sd),
    )
    .map_err(|e| CliError::usage(e.to_string()))
}

fn mcmc_settings(args: &McmcArgs) -> Result<SamplerSettings> {
    let mut settings = SamplerSettings::with_seed(args.seed);
    let chain = ChainConfig {
        iterations: args.iters.unwrap_or(settings.chain.iterations),
        burn_in: args.burn_in.unwrap_or(settings.chain.burn_in),
        thinning: args.thin.unwrap_or(settings.chain.thinning),
        seed: args.seed,
        proposal_scales: args.proposal_scales.clone().unwrap_or(settings.chain.proposal_scales),
    };
    chain.validate().map_err(|e| CliError::usage(e.to_string()))?;
    settings.chain = chain;
    settings.tuning = TuningConfig { iterations: args.tune_iters.unwrap_or(settings.tuning.iterations), ..settings.tuning };
    if settings.tuning.iterations > 0 && settings.tuning.iterations < settings.tuning.batch {
        return Err(CliError::usage(format!("--tune-iters must be 0 or at least {}", settings.tuning.batch)));
    }
    if args.augment_noise && args.noise_mode != NoiseMode::MarginalT {
        return Err(CliError::usage("--augment-noise applies to --noise-mode marginal-t only"));
    }
    settings.augment_noise = args.augment_noise;
    Ok(settings)
}

fn mcmc(args: &McmcArgs) -> Result<Planned> {
    let settings = mcmc_settings(args)?;
    let signal_prior = chirp_prior(args)?;
    let data = read_series(&args.input)?;
    let grid = data.grid();
    let read_prior = || -> Result<SpectrumPrior> {
        let path = args
            .prior
            .as_ref()
            .ok_or_else(|| CliError::usage(format!("--noise-mode {} needs --prior", args.noise_mode.name())))?;
        parse_prior(&read_text(path)?, path, &grid)
    };
    let noise = match args.noise_mode {
        NoiseMode::MarginalT => {
            let prior = read_prior()?;
            if let Some((bin, p)) = prior.bins().iter().enumerate().find(|(_, p)| p.is_improper()) {
                return Err(CliError::usage(format!(
                    "marginal-t needs a proper prior; bin {bin} has nu = {} and s2 = {}",
                    p.nu(),
                    p.s2()
                )));
            }
            NoiseModel::MarginalT(prior)
        }
        NoiseMode::FixedSpectrum => {
            let path = args.spectrum.as_ref().ok_or_else(|| CliError::usage("fixed-spectrum needs --spectrum"))?;
            NoiseModel::FixedSpectrum(parse_spectrum(&read_text(path)?, path, &grid)?)
        }
        NoiseMode::WhiteUnknown => {
            let prior = read_prior()?;
            let params = prior
                .common_params()
                .filter(|p| !p.is_improper())
                .ok_or_else(|| CliError::usage("white-unknown needs a proper prior shared by all bins"))?;
            NoiseModel::WhiteUnknown(params)
        }
    };
    let run = run_chirp_sampler(&data, &noise, &signal_prior, &settings)?;
    let summary = mcmc_summary(&run, args.noise_mode, &settings)?;

    let mut outputs = OutputSet::default();
    outputs.add(args.out.clone(), chain_table(&run).to_csv());
    outputs.add(args.summary_out.clone(), to_json(&summary)?);
    let config = json!({
        "command": "mcmc",
        "model": "chirp",
        "noise_mode": args.noise_mode.name(),
        "data": args.input.display().to_string(),
        "prior": args.prior.as_ref().map(|p| p.display().to_string()),
        "spectrum": args.spectrum.as_ref().map(|p| p.display().to_string()),
        "chain": serde_json::to_value(&summary.chain).map_err(|e| CliError::format("<config>", e))?,
        "augment_noise": settings.augment_noise,
        "signal_prior": {
            "f_min": signal_prior.f_min, "f_max": signal_prior.f_max,
            "a_min": signal_prior.a_min, "a_max": signal_prior.a_max,
            "fdot_mean": signal_prior.fdot_mean, "fdot_sd": signal_prior.fdot_sd,
        },
    });
    Ok((outputs, Some(args.seed), config))
}

pub fn mcmc_summary(run: &ChirpRun, mode: NoiseMode, settings: &SamplerSettings) -> Result<McmcSummary> {
    let s = run.summary()?;
    Ok(McmcSummary {
        model: "chirp".to_owned(),
        noise_mode: mode,
        chain: ChainRecord {
            iterations: settings.chain.iterations,
            burn_in: settings.chain.burn_in,
            thinning: settings.chain.thinning,
            seed: settings.chain.seed,
            proposal_scales: settings.chain.proposal_scales.clone(),
            tuning_iterations: settings.tuning.iterations,
        },
        samples: run.samples.len(),
        acceptance_rate: run.acceptance_rate,
        non_finite: run.non_finite,
        init: run.init.as_array().to_vec(),
        parameters: ParameterRecords {
            f: (&s.f).into(),
            fdot: (&s.fdot).into(),
            a: (&s.a).into(),
            phi: (&s.phi).into(),
        },
    })
}

pub fn chain_table(run: &ChirpRun) -> Table {
    let bins = run.samples.first().and_then(|s| s.noise.as_ref()).map_or(0, |d| d.sigma2().len());
    let mut header: Vec<String> = ["iter", "f", "fdot", "a", "phi", "log_target"].map(String::from).to_vec();
    header.extend((0..bins).map(|j| format!("sigma2_{j}")));
    let mut table = Table::new(header);
    for s in &run.samples {
        let p = s.signal.expect("chirp runs carry signal parameters");
        let mut row = vec![s.iteration as f64, p.f, p.fdot, p.a, p.phi, s.log_target];
        if let Some(noise) = &s.noise {
            row.extend_from_slice(noise.sigma2());
        }
        table.push(row);
    }
    table
}

fn autocov(args: &AutocovArgs) -> Result<Planned> {
    if args.draws < 2 {
        return Err(CliError::usage(format!("--draws must be at least 2, got {}", args.draws)));
    }
    if let Some(p) = args.quantiles.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(CliError::usage(format!("quantile {p} outside [0, 1]")));
    }
    let file: PosteriorFile = crate::format::from_json(&read_text(&args.posterior)?, &args.posterior)?;
    let posterior = file.to_prior(&args.posterior)?;
    if let Some((bin, p)) = posterior.bins().iter().enumerate().find(|(_, p)| p.is_improper()) {
        return Err(CliError::format(
            &args.posterior,
            format!(
                "bin {bin} is improper (nu = {}, s2 = {}); spectra cannot be drawn from it, \
                 use a proper prior or more data",
                p.nu(),
                p.s2()
            ),
        ));
    }
    let mut rng = chain_rng(args.seed, STREAM_MAIN);
    let summary = monte_carlo_autocovariance(&posterior, args.draws, &args.quantiles, &mut rng)?;
    let analytic = autocovariance_moments(&posterior)?;
    let mut header: Vec<String> =
        ["lag", "tau", "mean", "sd", "mean_se", "variance", "variance_se", "analytic_mean", "analytic_variance"]
            .map(String::from)
            .to_vec();
    header.extend(args.quantiles.iter().map(|p| format!("q{p}")));
    let mut table = Table::new(header);
    for (lag, exact) in summary.lags.iter().zip(&analytic) {
        let mut row = vec![
            lag.lag as f64,
            lag.lag as f64 * summary.dt,
            lag.mean,
            lag.sd(),
            lag.mean_se,
            lag.variance,
            lag.variance_se,
            exact.mean.finite().unwrap_or(f64::INFINITY),
            exact.variance.finite().unwrap_or(f64::INFINITY),
        ];
        row.extend_from_slice(&lag.quantiles);
        table.push(row);
    }
    let mut outputs = OutputSet::default();
    outputs.add(args.out.clone(), table.to_csv());
    let config = json!({
        "command": "autocov",
        "posterior": args.posterior.display().to_string(),
        "draws": args.draws,
        "quantiles": args.quantiles,
    });
    Ok((outputs, Some(args.seed), config))
}
