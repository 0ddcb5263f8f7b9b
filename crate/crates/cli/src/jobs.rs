//! The three commands.

use std::path::{Path, PathBuf};
use std::time::Instant;

use cvqe::driver::{diagnostics, RunTrajectory};
use cvqe::oracle::{fci_ground_state, LanczosOptions};
use cvqe::{
    build_qubit_hamiltonian, enumerate_excitations, hf_determinant, hf_energy, parse_fcidump, run_cvqe, Determinant,
    ExcitationList, QubitHamiltonian, ReferenceSet, SectorBasis, CHEMICAL_ACCURACY,
};
use log::{error, info};

use crate::config::{Mode, RunConfig};
use crate::error::CliError;
use crate::output::{self, RunSummary, ScanRow};

pub struct Problem {
    pub h: QubitHamiltonian,
    pub excs: ExcitationList,
    pub n_electrons: usize,
    pub hf: Determinant,
    pub hf_energy: f64,
}

pub fn load_problem(path: &Path) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let ints = parse_fcidump(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let h = build_qubit_hamiltonian(&ints)?;
    let ne = ints.n_electrons();
    let hf = hf_determinant(ne, h.n_qubits())?;
    Ok(Problem {
        hf_energy: hf_energy(&h, &hf)?,
        excs: enumerate_excitations(ne, h.n_qubits())?,
        n_electrons: ne,
        hf,
        h,
    })
}

/// FCI energy and the determinant weights of the ground state.
fn fci(p: &Problem) -> Result<(f64, ReferenceSet), CliError> {
    let sector = SectorBasis::particle_number(p.h.n_qubits(), p.n_electrons)?;
    let gs = fci_ground_state(&p.h, &sector, &LanczosOptions::default())?;
    let dets = sector
        .states()
        .iter()
        .map(|&b| Determinant::new(b, p.h.n_qubits()))
        .collect();
    let weights = gs.vector.iter().map(|a| a.norm()).collect();
    Ok((gs.energy, ReferenceSet::new(dets, weights)?))
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Runs one job and writes its artifacts. `cfg` must be resolved.
pub fn run(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let start = Instant::now();
    let p = load_problem(&cfg.fcidump)?;
    let (fci_energy, fci_state) = fci(&p)?;
    create_dir(&cfg.output_dir)?;

    let summary = match cfg.mode {
        Mode::Fci => {
            let d = diagnostics(&fci_state, &p.hf);
            RunSummary {
                mode: cfg.mode,
                bond_label: cfg.bond_label.clone(),
                final_energy: fci_energy,
                best_energy: fci_energy,
                fci_energy,
                hf_energy: p.hf_energy,
                error: 0.0,
                final_error: 0.0,
                p_hf_like: d.p_hf_like,
                p_top10: d.p_top10,
                n_dets_final: fci_state.len(),
                cycles_completed: 0,
                converged: true,
                seed: cfg.cycle.seed,
                wall_time_s: start.elapsed().as_secs_f64(),
            }
        }
        Mode::Cvqe | Mode::UccsdOnly => {
            let t: RunTrajectory = run_cvqe(&p.h, &p.excs, p.n_electrons, &cfg.cycle)?;
            output::write_trajectory(&cfg.output_dir.join(&cfg.trajectory_file), &t.records)?;
            let d = t.final_diagnostics();
            RunSummary {
                mode: cfg.mode,
                bond_label: cfg.bond_label.clone(),
                final_energy: t.final_energy,
                best_energy: t.best_energy,
                fci_energy,
                hf_energy: p.hf_energy,
                error: t.best_energy - fci_energy,
                final_error: t.final_energy - fci_energy,
                p_hf_like: d.p_hf_like,
                p_top10: d.p_top10,
                n_dets_final: t.reference.len(),
                cycles_completed: t.cycles_completed(),
                converged: t.converged,
                seed: cfg.cycle.seed,
                wall_time_s: start.elapsed().as_secs_f64(),
            }
        }
    };
    output::write_summary(&cfg.output_dir.join(&cfg.summary_file), &summary, cfg)?;
    info!(
        "{}: E={:.10} E_FCI={:.10} error={:.3e}",
        summary.bond_label, summary.best_energy, summary.fci_energy, summary.error
    );
    Ok(summary)
}

fn point_label(fixture: &Path, index: usize) -> String {
    fixture
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| format!("point{index}"))
}

fn scan_point(base: &RunConfig, fixture: &Path, index: usize) -> Result<ScanRow, CliError> {
    let label = point_label(fixture, index);
    let point_dir = base.output_dir.join(&label);
    let job = |mode: Mode| -> Result<RunSummary, CliError> {
        let mut cfg = base.clone();
        cfg.fcidump = fixture.to_path_buf();
        cfg.bond_label = label.clone();
        cfg.mode = mode;
        cfg.cycle.seed = base.cycle.seed.wrapping_add(index as u64);
        cfg.output_dir = point_dir.join(match mode {
            Mode::UccsdOnly => "uccsd_only",
            _ => "cvqe",
        });
        run(&cfg.resolve()?)
    };
    let u = job(Mode::UccsdOnly)?;
    let c = job(Mode::Cvqe)?;
    Ok(ScanRow {
        bond_label: label,
        e_hf: Some(c.hf_energy),
        e_uccsd_only: Some(u.best_energy),
        e_cvqe: Some(c.best_energy),
        e_fci: Some(c.fci_energy),
        p_hf_like: Some(c.p_hf_like),
        p_top10: Some(c.p_top10),
        failure: None,
    })
}

/// UCCSD-only and CVQE on every fixture, then `scan.csv` in the output
/// directory. Failed points are recorded and reported at the end.
pub fn scan(base: &RunConfig, fixtures: &[PathBuf]) -> Result<Vec<ScanRow>, CliError> {
    if fixtures.is_empty() {
        return Err(CliError::Config("scan needs at least one fixture".into()));
    }
    base.check_cycle()?;
    let mut base = base.clone();
    base.output_dir = std::path::absolute(&base.output_dir).map_err(|e| CliError::io(&base.output_dir, e))?;
    let mut rows = Vec::with_capacity(fixtures.len());
    let mut worst_code = 0;
    for (i, f) in fixtures.iter().enumerate() {
        match scan_point(&base, f, i) {
            Ok(row) => rows.push(row),
            Err(e) => {
                error!("{e}");
                worst_code = worst_code.max(e.exit_code());
                rows.push(ScanRow {
                    bond_label: point_label(f, i),
                    failure: Some(e.to_string()),
                    ..Default::default()
                });
            }
        }
    }
    create_dir(&base.output_dir)?;
    output::write_scan(&base.output_dir.join("scan.csv"), &rows, CHEMICAL_ACCURACY)?;
    let failed = rows.iter().filter(|r| r.failure.is_some()).count();
    if failed > 0 {
        return Err(CliError::Scan {
            failed,
            total: rows.len(),
            code: worst_code,
        });
    }
    Ok(rows)
}

pub struct FciReport {
    pub hf_energy: f64,
    pub fci_energy: f64,
}

pub fn fci_report(path: &Path) -> Result<FciReport, CliError> {
    let p = load_problem(path)?;
    let (fci_energy, _) = fci(&p)?;
    Ok(FciReport {
        hf_energy: p.hf_energy,
        fci_energy,
    })
}
