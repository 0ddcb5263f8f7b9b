//! Trajectory tables, summary documents and the scan aggregate.

use std::fmt::Write as _;
use std::path::Path;

use cvqe::driver::IterationRecord;
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::config::{Mode, RunConfig};
use crate::error::CliError;

/// 17 significant digits, enough to reproduce any `f64` exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_trajectory(path: &Path, records: &[IterationRecord]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "iteration",
        "cycle",
        "energy",
        "best_energy",
        "n_dets_current",
        "reset_flag",
        "dets_added",
    ])?;
    for r in records {
        w.write_record([
            r.iteration.to_string(),
            r.cycle.to_string(),
            fmt_f64(r.energy),
            fmt_f64(r.best_energy),
            r.n_dets_current.to_string(),
            u8::from(r.reset_flag).to_string(),
            r.dets_added.to_string(),
        ])?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSummary {
    pub mode: Mode,
    pub bond_label: String,
    pub final_energy: f64,
    pub best_energy: f64,
    pub fci_energy: f64,
    pub hf_energy: f64,
    /// Best-so-far energy minus the FCI energy.
    pub error: f64,
    pub final_error: f64,
    pub p_hf_like: f64,
    pub p_top10: f64,
    pub n_dets_final: usize,
    pub cycles_completed: usize,
    pub converged: bool,
    pub seed: u64,
    pub wall_time_s: f64,
}

/// `[result]` followed by the resolved `[config]`.
pub fn render_summary(s: &RunSummary, cfg: &RunConfig) -> String {
    let mut out = String::from("[result]\n");
    let q = |v: &str| Value::String(v.to_string()).to_string();
    let mode = match s.mode {
        Mode::Cvqe => "cvqe",
        Mode::UccsdOnly => "uccsd_only",
        Mode::Fci => "fci",
    };
    let _ = writeln!(out, "mode = {}", q(mode));
    let _ = writeln!(out, "bond_label = {}", q(&s.bond_label));
    for (k, v) in [
        ("final_energy", s.final_energy),
        ("best_energy", s.best_energy),
        ("fci_energy", s.fci_energy),
        ("hf_energy", s.hf_energy),
        ("error", s.error),
        ("final_error", s.final_error),
        ("p_hf_like", s.p_hf_like),
        ("p_top10", s.p_top10),
    ] {
        let _ = writeln!(out, "{k} = {}", fmt_f64(v));
    }
    let _ = writeln!(out, "n_dets_final = {}", s.n_dets_final);
    let _ = writeln!(out, "cycles_completed = {}", s.cycles_completed);
    let _ = writeln!(out, "converged = {}", s.converged);
    let _ = writeln!(out, "seed = {}", s.seed);
    let _ = writeln!(out, "wall_time_s = {}", fmt_f64(s.wall_time_s));
    out.push('\n');
    let mut doc = Table::new();
    doc.insert("config".into(), Value::Table(cfg.to_table()));
    out.push_str(&toml::to_string(&doc).expect("config serialises"));
    out
}

pub fn write_summary(path: &Path, s: &RunSummary, cfg: &RunConfig) -> Result<(), CliError> {
    std::fs::write(path, render_summary(s, cfg)).map_err(|e| CliError::io(path, e))
}

/// Reads a summary back into its result and config halves.
pub fn read_summary(path: &Path) -> Result<(RunSummary, RunConfig), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut doc: Table = toml::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
    let bad = |what: &str| CliError::Config(format!("{}: missing [{what}] table", path.display()));
    let result = doc.remove("result").ok_or_else(|| bad("result"))?;
    let config = doc.remove("config").ok_or_else(|| bad("config"))?;
    let summary: RunSummary = result
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
    let text = toml::to_string(&config).map_err(|e| CliError::Config(e.to_string()))?;
    let cfg = RunConfig::parse(&text, Path::new("/"))?;
    Ok((summary, cfg))
}

/// One row of the scan aggregate; energy fields are empty for failed points.
#[derive(Debug, Clone, Default)]
pub struct ScanRow {
    pub bond_label: String,
    pub e_hf: Option<f64>,
    pub e_uccsd_only: Option<f64>,
    pub e_cvqe: Option<f64>,
    pub e_fci: Option<f64>,
    pub p_hf_like: Option<f64>,
    pub p_top10: Option<f64>,
    pub failure: Option<String>,
}

pub fn write_scan(path: &Path, rows: &[ScanRow], accuracy: f64) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "bond_label",
        "E_HF",
        "E_UCCSD_only",
        "E_CVQE",
        "E_FCI",
        "err_UCCSD_only",
        "err_CVQE",
        "chemical_accuracy",
        "p_HF_like",
        "p_top10",
        "status",
    ])?;
    let f = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    for r in rows {
        let err = |e: Option<f64>| e.zip(r.e_fci).map(|(a, b)| a - b);
        let err_cvqe = err(r.e_cvqe);
        let flag = match err_cvqe {
            Some(e) if e < accuracy => "pass",
            Some(_) => "fail",
            None => "",
        };
        let status = match &r.failure {
            None => "ok".to_string(),
            Some(msg) => format!("failed: {msg}"),
        };
        w.write_record([
            r.bond_label.clone(),
            f(r.e_hf),
            f(r.e_uccsd_only),
            f(r.e_cvqe),
            f(r.e_fci),
            f(err(r.e_uccsd_only)),
            f(err_cvqe),
            flag.to_string(),
            f(r.p_hf_like),
            f(r.p_top10),
            status,
        ])?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
