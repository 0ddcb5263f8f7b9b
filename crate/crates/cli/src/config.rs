//! Run configuration: a flat TOML document of run keys plus the cycle
//! settings, with unknown keys rejected.

use std::path::{Path, PathBuf};

use cvqe::{CycleConfig, SelectionMode};
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Mode {
    Cvqe,
    UccsdOnly,
    Fci,
}

/// Keys that belong to the run rather than to the cycle settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunKeys {
    #[serde(default)]
    fcidump: Option<PathBuf>,
    #[serde(default = "default_mode")]
    mode: Mode,
    #[serde(default)]
    bond_label: Option<String>,
    #[serde(default)]
    output_dir: Option<PathBuf>,
    #[serde(default = "default_trajectory")]
    trajectory_file: String,
    #[serde(default = "default_summary")]
    summary_file: String,
}

const RUN_KEYS: [&str; 6] = ["fcidump", "mode", "bond_label", "output_dir", "trajectory_file", "summary_file"];

fn default_mode() -> Mode {
    Mode::Cvqe
}

fn default_trajectory() -> String {
    "trajectory.csv".into()
}

fn default_summary() -> String {
    "summary.toml".into()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Empty when the document names no Hamiltonian (scan configs).
    pub fcidump: PathBuf,
    pub mode: Mode,
    pub bond_label: String,
    pub output_dir: PathBuf,
    pub trajectory_file: String,
    pub summary_file: String,
    pub cycle: CycleConfig,
}

/// Command-line overrides shared by `run` and `scan`.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub mode: Option<Mode>,
    pub n_dets: Option<usize>,
    pub shots: Option<u64>,
    pub exact_selection: bool,
}

impl RunConfig {
    /// Parses a config document. Relative `fcidump` and `output_dir` paths
    /// are taken relative to `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let mut table: Table = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let mut run = Table::new();
        for key in RUN_KEYS {
            if let Some(v) = table.remove(key) {
                run.insert(key.to_string(), v);
            }
        }
        let keys: RunKeys = run.try_into().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        let cycle: CycleConfig = table
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        let fcidump = keys.fcidump.map(|f| base.join(f)).unwrap_or_default();
        let bond_label = keys.bond_label.unwrap_or_else(|| {
            fcidump
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default()
        });
        Ok(RunConfig {
            fcidump,
            mode: keys.mode,
            bond_label,
            output_dir: base.join(keys.output_dir.unwrap_or_else(|| PathBuf::from("."))),
            trajectory_file: keys.trajectory_file,
            summary_file: keys.summary_file,
            cycle,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        RunConfig::parse(&text, base)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.cycle.seed = seed;
        }
        if let Some(dir) = &o.output_dir {
            self.output_dir = dir.clone();
        }
        if let Some(mode) = o.mode {
            self.mode = mode;
        }
        if let Some(n) = o.n_dets {
            self.cycle.n_dets = n;
        }
        if let Some(shots) = o.shots {
            self.cycle.n_shots = shots;
        }
        if o.exact_selection {
            self.cycle.selection_mode = SelectionMode::Exact;
        }
    }

    /// Fills derived defaults, checks the cycle settings, and makes paths
    /// absolute so the echoed config is usable from anywhere.
    pub fn resolve(mut self) -> Result<Self, CliError> {
        if self.fcidump.as_os_str().is_empty() {
            return Err(CliError::Config("missing key `fcidump`".into()));
        }
        self.check_cycle()?;
        if self.mode == Mode::UccsdOnly {
            self.cycle.selection_mode = SelectionMode::Disabled;
        }
        self.cycle = self.cycle.resolved();
        self.fcidump = self
            .fcidump
            .canonicalize()
            .map_err(|e| CliError::io(&self.fcidump, e))?;
        self.output_dir = std::path::absolute(&self.output_dir).map_err(|e| CliError::io(&self.output_dir, e))?;
        Ok(self)
    }

    pub fn check_cycle(&self) -> Result<(), CliError> {
        self.cycle.validate().map_err(|e| CliError::Config(e.to_string()))?;
        if self.cycle.seed > i64::MAX as u64 {
            return Err(CliError::Config(format!("seed {} exceeds {}", self.cycle.seed, i64::MAX)));
        }
        Ok(())
    }

    /// The flat document form, as accepted by [`RunConfig::parse`].
    pub fn to_table(&self) -> Table {
        let mut t = match Value::try_from(&self.cycle) {
            Ok(Value::Table(t)) => t,
            _ => unreachable!("cycle settings serialise to a table"),
        };
        let mut put = |k: &str, v: Value| {
            t.insert(k.to_string(), v);
        };
        put("fcidump", Value::String(self.fcidump.to_string_lossy().into_owned()));
        put("mode", Value::try_from(self.mode).expect("mode serialises"));
        put("bond_label", Value::String(self.bond_label.clone()));
        put("output_dir", Value::String(self.output_dir.to_string_lossy().into_owned()));
        put("trajectory_file", Value::String(self.trajectory_file.clone()));
        put("summary_file", Value::String(self.summary_file.clone()));
        t
    }
}
