//! Run manifests and atomic output files.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::format::to_json;

/// Written next to the first output of every command as
/// `<output>.manifest.json`. Running `command_line` again reproduces the
/// outputs byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Arguments after the program name.
    pub command_line: Vec<String>,
    pub seed: Option<u64>,
    /// SHA-256 of the compact JSON form of `config`.
    pub config_digest: String,
    /// Fully resolved settings, presets and defaults applied.
    pub config: serde_json::Value,
    pub version: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command_line: Vec<String>, seed: Option<u64>, config: serde_json::Value, outputs: &[PathBuf]) -> Self {
        Self {
            command_line,
            seed,
            config_digest: digest(&config),
            config,
            version: env!("CARGO_PKG_VERSION").to_owned(),
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        }
    }
}

pub fn digest(config: &serde_json::Value) -> String {
    let hash = Sha256::digest(config.to_string().as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path.file_name().ok_or_else(|| CliError::usage(format!("{} is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = dir.join(tmp_name);
    let result = (|| {
        let mut file = std::fs::File::create(&tmp)?;
        file.write_all(contents)?;
        file.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = std::fs::remove_file(&tmp);
        return Err(CliError::io(path, e));
    }
    Ok(())
}

/// Outputs of one command, written together with their manifest.
#[derive(Debug, Default)]
pub struct OutputSet {
    files: Vec<(PathBuf, String)>,
}

impl OutputSet {
    pub fn add(&mut self, path: PathBuf, contents: String) {
        self.files.push((path, contents));
    }

    pub fn paths(&self) -> Vec<PathBuf> {
        self.files.iter().map(|(p, _)| p.clone()).collect()
    }

    /// Writes every file, then the manifest; returns the manifest path.
    pub fn commit(self, command_line: Vec<String>, seed: Option<u64>, config: serde_json::Value) -> Result<PathBuf> {
        let paths = self.paths();
        let first = paths.first().ok_or_else(|| CliError::usage("no output requested"))?;
        let manifest = RunManifest::new(command_line, seed, config, &paths);
        let manifest_file = manifest_path(first);
        for (path, contents) in &self.files {
            write_atomic(path, contents.as_bytes())?;
        }
        write_atomic(&manifest_file, to_json(&manifest)?.as_bytes())?;
        Ok(manifest_file)
    }
}
