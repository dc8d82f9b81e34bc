//! CSV and JSON file formats. Every float is written with 17 significant
//! digits, so values survive a write/read cycle exactly and re-emitting a
//! parsed file reproduces it byte for byte.

use std::path::Path;

use colnoise_core::{FourierGrid, FrequencyBand, InvChiSqParams, SpectrumDraw, SpectrumPrior, TimeSeries};
use colnoise_core::spectrum::BandTarget;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `serialize_with` helpers emitting JSON numbers in the 17-digit form.
pub mod f17 {
    use serde::{Serialize, Serializer};
    use serde_json::Number;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if !x.is_finite() {
            return Err(serde::ser::Error::custom(format!("cannot write {x} as a JSON number")));
        }
        let n: Number = super::fmt_f64(*x).parse().map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }

    pub fn option<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&Wrap(*x))?;
        }
        seq.end()
    }

    struct Wrap(f64);

    impl Serialize for Wrap {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            serialize(&self.0, s)
        }
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::format("<output>", e))?;
    text.push('\n');
    Ok(text)
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Result<T> {
    serde_json::from_str(text).map_err(|e| CliError::format(path, e))
}

/// A CSV file of named float columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Empty cells are written for non-finite values.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> =
                row.iter().map(|v| if v.is_finite() { fmt_f64(*v) } else { String::new() }).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Empty cells read back as NaN.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let header: Vec<String> =
            reader.headers().map_err(|e| CliError::format(path, e))?.iter().map(str::to_owned).collect();
        let mut rows = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| CliError::format(path, e))?;
            let row = record
                .iter()
                .map(|cell| {
                    if cell.is_empty() {
                        Ok(f64::NAN)
                    } else {
                        cell.parse::<f64>()
                            .map_err(|_| CliError::format(path, format!("row {}: `{cell}` is not a number", line + 1)))
                    }
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    fn expect_header(&self, expected: &[&str], path: &Path) -> Result<()> {
        if self.header.len() < expected.len() || self.header.iter().zip(expected).any(|(h, e)| h != e) {
            return Err(CliError::format(
                path,
                format!("expected columns `{}`, found `{}`", expected.join(","), self.header.join(",")),
            ));
        }
        Ok(())
    }
}

/// `t,x` with `t_k = k·dt`.
pub fn series_csv(ts: &TimeSeries) -> String {
    let mut table = Table::new(["t", "x"]);
    for (t, x) in ts.times().zip(ts.samples()) {
        table.push(vec![t, *x]);
    }
    table.to_csv()
}

/// Reads `t,x`; the times must start at 0 and be evenly spaced.
pub fn parse_series(text: &str, path: &Path) -> Result<TimeSeries> {
    let table = Table::parse(text, path)?;
    table.expect_header(&["t", "x"], path)?;
    if table.rows.len() < 2 {
        return Err(CliError::format(path, "need at least two samples"));
    }
    let dt = table.rows[1][0] - table.rows[0][0];
    for (k, row) in table.rows.iter().enumerate() {
        if row.len() != 2 {
            return Err(CliError::format(path, format!("row {} has {} cells", k + 1, row.len())));
        }
        if !((row[0] - k as f64 * dt).abs() <= 1e-9 * dt * (k as f64).max(1.0)) {
            return Err(CliError::format(path, format!("row {}: times must be k·dt from 0", k + 1)));
        }
    }
    TimeSeries::new(table.rows.iter().map(|r| r[1]).collect(), dt).map_err(|e| CliError::format(path, e))
}

/// One bin of a prior file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinRecord {
    #[serde(serialize_with = "f17::serialize")]
    pub nu: f64,
    #[serde(serialize_with = "f17::serialize")]
    pub s2: f64,
    pub improper: bool,
}

impl From<&InvChiSqParams> for BinRecord {
    fn from(p: &InvChiSqParams) -> Self {
        Self { nu: p.nu(), s2: p.s2(), improper: p.is_improper() }
    }
}

impl BinRecord {
    pub fn to_params(&self) -> colnoise_core::Result<InvChiSqParams> {
        InvChiSqParams::from_parts(self.nu, self.s2, self.improper)
    }
}

pub fn prior_json(prior: &SpectrumPrior) -> Result<String> {
    to_json(&prior.bins().iter().map(BinRecord::from).collect::<Vec<_>>())
}

pub fn parse_prior(text: &str, path: &Path, grid: &FourierGrid) -> Result<SpectrumPrior> {
    let records: Vec<BinRecord> = from_json(text, path)?;
    let bins = records
        .iter()
        .enumerate()
        .map(|(j, r)| r.to_params().map_err(|e| CliError::format(path, format!("bin {j}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    SpectrumPrior::new(bins, *grid).map_err(|e| CliError::format(path, e))
}

/// One bin of a posterior file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorBin {
    pub bin: usize,
    #[serde(serialize_with = "f17::serialize")]
    pub f: f64,
    pub kappa: u32,
    #[serde(serialize_with = "f17::serialize")]
    pub nu: f64,
    #[serde(serialize_with = "f17::serialize")]
    pub s2: f64,
    pub improper: bool,
    /// `false` when `ν' ≤ 2`.
    pub mean_exists: bool,
    #[serde(serialize_with = "f17::option")]
    pub mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorFile {
    pub n: usize,
    #[serde(serialize_with = "f17::serialize")]
    pub dt: f64,
    pub bins: Vec<PosteriorBin>,
}

impl PosteriorFile {
    pub fn from_prior(posterior: &SpectrumPrior) -> Result<Self> {
        let grid = posterior.grid();
        let bins = posterior
            .bins()
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let mean = if p.is_improper() { None } else { p.mean()?.finite() };
                Ok(PosteriorBin {
                    bin: j,
                    f: grid.frequency(j),
                    kappa: grid.kappa(j),
                    nu: p.nu(),
                    s2: p.s2(),
                    improper: p.is_improper(),
                    mean_exists: mean.is_some(),
                    mean,
                })
            })
            .collect::<colnoise_core::Result<Vec<_>>>()?;
        Ok(Self { n: grid.n(), dt: grid.dt(), bins })
    }

    pub fn to_prior(&self, path: &Path) -> Result<SpectrumPrior> {
        let grid = FourierGrid::new(self.n, self.dt).map_err(|e| CliError::format(path, e))?;
        let bins = self
            .bins
            .iter()
            .map(|b| {
                InvChiSqParams::from_parts(b.nu, b.s2, b.improper)
                    .map_err(|e| CliError::format(path, format!("bin {}: {e}", b.bin)))
            })
            .collect::<Result<Vec<_>>>()?;
        SpectrumPrior::new(bins, grid).map_err(|e| CliError::format(path, e))
    }
}

/// `f,sigma2` per bin.
pub fn spectrum_csv(draw: &SpectrumDraw) -> String {
    let grid = draw.grid();
    let mut table = Table::new(["f", "sigma2"]);
    for (j, s) in draw.sigma2().iter().enumerate() {
        table.push(vec![grid.frequency(j), *s]);
    }
    table.to_csv()
}

pub fn parse_spectrum(text: &str, path: &Path, grid: &FourierGrid) -> Result<SpectrumDraw> {
    let table = Table::parse(text, path)?;
    table.expect_header(&["f", "sigma2"], path)?;
    if table.rows.len() != grid.bins() {
        return Err(CliError::format(path, format!("expected {} bins, found {}", grid.bins(), table.rows.len())));
    }
    for (j, row) in table.rows.iter().enumerate() {
        if (row[0] - grid.frequency(j)).abs() > 1e-9 * grid.df() * (j as f64).max(1.0) {
            return Err(CliError::format(path, format!("row {}: frequency {} is not f_{j}", j + 1, row[0])));
        }
    }
    SpectrumDraw::new(table.rows.iter().map(|r| r[1]).collect(), *grid).map_err(|e| CliError::format(path, e))
}

/// `f1,f2,mean,var`, one band per row; a band with `f1 = 0` includes DC.
pub fn parse_bands(text: &str, path: &Path) -> Result<Vec<BandTarget>> {
    let table = Table::parse(text, path)?;
    table.expect_header(&["f1", "f2", "mean", "var"], path)?;
    Ok(table
        .rows
        .iter()
        .map(|r| {
            let band = FrequencyBand::new(r[0], r[1]);
            BandTarget { band: if r[0] == 0.0 { band.with_dc() } else { band }, mean: r[2], variance: r[3] }
        })
        .collect())
}

pub fn bands_csv(targets: &[BandTarget]) -> String {
    let mut table = Table::new(["f1", "f2", "mean", "var"]);
    for t in targets {
        table.push(vec![t.band.lower, t.band.upper, t.mean, t.variance]);
    }
    table.to_csv()
}
