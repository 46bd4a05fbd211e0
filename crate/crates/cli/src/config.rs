//! Run configuration: built-in defaults, then an optional TOML file, then flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::CliError;
use crate::output::Format;

pub const DEFAULT_SEED: u64 = 1;

/// Tolerance names accepted by `--tol`, with defaults.
pub const TOLERANCES: &[(&str, f64)] = &[
    // absolute slack on LMI minimum eigenvalues
    ("lmi", abssep::absppt::LMI_TOL),
    // certificate value vs. closed form
    ("cert", 1e-10),
    // orbit-scan violation slack
    ("scan", 1e-8),
];

/// Sample-count names, with defaults.
pub const SAMPLE_COUNTS: &[(&str, usize)] = &[
    ("orbit", 1000),
    ("grid", 21),
    ("curve", 1001),
    ("witness_duals", 50),
    ("sweep", 201),
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub sample_counts: BTreeMap<String, usize>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            tolerances: TOLERANCES.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            sample_counts: SAMPLE_COUNTS.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            output_path: None,
            format: None,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    #[serde(default)]
    tol: BTreeMap<String, f64>,
    #[serde(default)]
    samples: BTreeMap<String, usize>,
}

/// Flag values layered over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tolerances: Vec<(String, f64)>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(file: Option<&Path>, flags: Overrides) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
            let f: ConfigFile = toml::from_str(&text)
                .map_err(|e| CliError::Input(format!("bad config {}: {e}", path.display())))?;
            cfg.seed = f.seed.unwrap_or(cfg.seed);
            cfg.output_path = f.out;
            cfg.format = f.format;
            for (k, v) in f.tol {
                cfg.set_tolerance(&k, v)?;
            }
            for (k, v) in f.samples {
                cfg.set_count(&k, v)?;
            }
        }
        if let Some(s) = flags.seed {
            cfg.seed = s;
        }
        for (k, v) in flags.tolerances {
            cfg.set_tolerance(&k, v)?;
        }
        if flags.out.is_some() {
            cfg.output_path = flags.out;
        }
        if flags.format.is_some() {
            cfg.format = flags.format;
        }
        Ok(cfg)
    }

    pub fn set_tolerance(&mut self, name: &str, v: f64) -> Result<(), CliError> {
        if !self.tolerances.contains_key(name) {
            return Err(CliError::Input(format!("unknown tolerance '{name}' (known: {})", known(TOLERANCES))));
        }
        if !(v >= 0.0 && v.is_finite()) {
            return Err(CliError::Input(format!("tolerance {name} must be finite and >= 0, got {v}")));
        }
        self.tolerances.insert(name.into(), v);
        Ok(())
    }

    pub fn set_count(&mut self, name: &str, v: usize) -> Result<(), CliError> {
        if !self.sample_counts.contains_key(name) {
            return Err(CliError::Input(format!("unknown sample count '{name}' (known: {})", known(SAMPLE_COUNTS))));
        }
        if v == 0 {
            return Err(CliError::Input(format!("sample count {name} must be at least 1")));
        }
        self.sample_counts.insert(name.into(), v);
        Ok(())
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }

    pub fn count(&self, name: &str) -> usize {
        self.sample_counts[name]
    }
}

fn known<T>(list: &[(&str, T)]) -> String {
    list.iter().map(|(k, _)| *k).collect::<Vec<_>>().join(", ")
}

/// Parses `name=value` for `--tol`.
pub fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("bad number in '{s}': {e}"))?;
    Ok((k.trim().to_string(), v))
}
