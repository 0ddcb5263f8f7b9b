//! The CVQE cycle: optimise (θ, c) on the current reference, sample the
//! trial state, admit high-probability determinants, prune to the budget,
//! repeat.

use std::collections::BTreeMap;

use log::{debug, info, warn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::excitation::{hf_determinant, ExcitationList};
use crate::hamiltonian::QubitHamiltonian;
use crate::optimizer::{gd_step, AdamaxConfig, AdamaxState, ResetReason, RestartPolicy, RestartScheduler};
use crate::statevector::{exact_probabilities, sample_counts_with, Determinant, Evaluator, ReferenceSet};

/// How new determinants are discovered after each cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMode {
    /// Multinomial sampling with `n_shots` shots.
    Shots,
    /// Exact `|amplitude|²`.
    Exact,
    /// No expansion; plain UCCSD on the Hartree–Fock reference.
    Disabled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CycleConfig {
    pub iters_per_cycle: usize,
    pub max_cycles: usize,
    pub n_shots: u64,
    pub selection_mode: SelectionMode,
    /// Proportionality constant between `‖∇_θE‖` and the admission threshold.
    pub threshold_scale: f64,
    /// Lower clamp on the threshold; `max(1/n_shots, 1e-4)` when unset.
    pub threshold_floor: Option<f64>,
    pub threshold_ceiling: f64,
    /// Determinant budget.
    pub n_dets: usize,
    /// New coefficients are `ω · coeff_init_scale · ‖∇_cE‖`, `ω ~ U(−1, 1)`.
    pub coeff_init_scale: f64,
    pub theta_step_size: f64,
    pub restart: RestartPolicy,
    pub adamax: AdamaxConfig,
    pub seed: u64,
    /// Stop once the best energy improves by less than this in two consecutive cycles.
    pub energy_tol: f64,
}

impl Default for CycleConfig {
    fn default() -> Self {
        CycleConfig {
            iters_per_cycle: 200,
            max_cycles: 30,
            n_shots: 100_000,
            selection_mode: SelectionMode::Shots,
            threshold_scale: 0.1,
            threshold_floor: None,
            threshold_ceiling: 0.5,
            n_dets: 1000,
            coeff_init_scale: 0.1,
            theta_step_size: 0.05,
            restart: RestartPolicy::default(),
            adamax: AdamaxConfig::default(),
            seed: 0,
            energy_tol: 1e-7,
        }
    }
}

/// Zero-gradient fallback for the coefficient-initialisation scale.
const DEAD_GRADIENT: f64 = 1e-12;
const FALLBACK_SCALE: f64 = 1e-3;

impl CycleConfig {
    pub fn threshold_floor(&self) -> f64 {
        self.threshold_floor
            .unwrap_or_else(|| (1.0 / self.n_shots.max(1) as f64).max(1e-4))
    }

    /// Copy with every derived default written out.
    pub fn resolved(&self) -> CycleConfig {
        CycleConfig {
            threshold_floor: Some(self.threshold_floor()),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let floor = self.threshold_floor();
        let checks = [
            (self.iters_per_cycle >= 1, "iters_per_cycle must be at least 1"),
            (self.max_cycles >= 1, "max_cycles must be at least 1"),
            (self.n_shots >= 1, "n_shots must be at least 1"),
            (self.n_dets >= 1, "n_dets must be at least 1"),
            (
                floor > 0.0 && floor <= self.threshold_ceiling && self.threshold_ceiling <= 1.0,
                "need 0 < threshold_floor <= threshold_ceiling <= 1",
            ),
            (self.threshold_scale >= 0.0, "threshold_scale must be non-negative"),
            (self.coeff_init_scale >= 0.0, "coeff_init_scale must be non-negative"),
            (
                self.theta_step_size > 0.0 && self.theta_step_size.is_finite(),
                "theta_step_size must be positive",
            ),
            (self.energy_tol >= 0.0, "energy_tol must be non-negative"),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(Error::invalid(msg));
            }
        }
        self.restart.validate()?;
        self.adamax.validate()
    }
}

/// One inner iteration. `energy` is evaluated before that iteration's update.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub cycle: usize,
    pub energy: f64,
    pub best_energy: f64,
    pub n_dets_current: usize,
    pub reset_flag: bool,
    pub dets_added: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Weight of determinants at most doubly excited from Hartree–Fock.
    pub p_hf_like: f64,
    /// Weight of the ten heaviest determinants.
    pub p_top10: f64,
}

/// What happened at the end of one cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleEvent {
    pub cycle: usize,
    pub energy: f64,
    pub best_energy: f64,
    pub grad_theta_norm: f64,
    pub grad_coeffs_norm: f64,
    pub p_threshold: f64,
    pub added: Vec<Determinant>,
    pub pruned: Vec<Determinant>,
    pub hf_pruned: bool,
    /// Iterations (1-based, global) after which the optimiser moments were reset.
    pub resets: Vec<(usize, ResetReason)>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone)]
pub struct RunTrajectory {
    pub records: Vec<IterationRecord>,
    pub cycles: Vec<CycleEvent>,
    pub reference: ReferenceSet,
    pub theta: Vec<f64>,
    pub hf: Determinant,
    /// Energy of the final (θ, c).
    pub final_energy: f64,
    pub best_energy: f64,
    /// Stopped by the energy tolerance rather than the cycle cap.
    pub converged: bool,
}

impl RunTrajectory {
    pub fn cycles_completed(&self) -> usize {
        self.cycles.len()
    }

    pub fn final_diagnostics(&self) -> Diagnostics {
        diagnostics(&self.reference, &self.hf)
    }
}

/// `clamp(κ_th · ‖∇_θE‖, floor, ceiling)`.
pub fn compute_threshold(grad_theta_norm: f64, cfg: &CycleConfig) -> f64 {
    (cfg.threshold_scale * grad_theta_norm).clamp(cfg.threshold_floor(), cfg.threshold_ceiling)
}

/// Determinants at or above `p_th` not yet in `current`, heaviest first
/// (ties by ascending bitmask). Wrong-sector entries are dropped with a warning.
pub fn select_determinants(
    probs: &BTreeMap<Determinant, f64>,
    p_th: f64,
    current: &ReferenceSet,
) -> Vec<Determinant> {
    let (nq, ne) = (current.n_qubits(), current.n_electrons());
    let mut picked: Vec<(Determinant, f64)> = probs
        .iter()
        .filter(|&(_, &p)| p >= p_th)
        .filter(|&(d, _)| {
            let ok = d.n_qubits() == nq && d.n_electrons() == ne;
            if !ok {
                warn!("ignoring determinant {d} outside the {ne}-electron sector");
            }
            ok
        })
        .filter(|(d, _)| !current.contains(d))
        .map(|(&d, &p)| (d, p))
        .collect();
    picked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    picked.into_iter().map(|(d, _)| d).collect()
}

/// Random starting coefficients for `n_new` admitted determinants.
pub fn initialize_new_coefficients<R: Rng + ?Sized>(
    n_new: usize,
    grad_coeffs_norm: f64,
    cfg: &CycleConfig,
    rng: &mut R,
) -> Vec<f64> {
    let scale = if grad_coeffs_norm < DEAD_GRADIENT {
        cfg.coeff_init_scale * FALLBACK_SCALE
    } else {
        cfg.coeff_init_scale * grad_coeffs_norm
    };
    (0..n_new)
        .map(|_| loop {
            let w: f64 = rng.random_range(-1.0..1.0);
            if w != -1.0 {
                break w * scale;
            }
        })
        .collect()
}

/// Keeps the `n_dets` largest `|c_i|` (earlier admission wins ties) and
/// renormalises. Returns the kept-flags alongside the new set.
pub fn prune_reference(reference: &ReferenceSet, n_dets: usize) -> Result<(ReferenceSet, Vec<bool>)> {
    if n_dets == 0 {
        return Err(Error::invalid("determinant budget must be at least 1"));
    }
    let n = reference.len();
    if n <= n_dets {
        return Ok((reference.clone(), vec![true; n]));
    }
    let c = reference.coeffs();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| c[b].abs().total_cmp(&c[a].abs()));
    let mut keep = vec![false; n];
    for &i in &order[..n_dets] {
        keep[i] = true;
    }
    let mut out = reference.clone();
    out.retain_mask(&keep)?;
    out.normalize()?;
    Ok((out, keep))
}

pub fn diagnostics(reference: &ReferenceSet, hf: &Determinant) -> Diagnostics {
    let norm2 = reference.norm().powi(2);
    let mut weights: Vec<f64> = reference.coeffs().iter().map(|c| c * c / norm2).collect();
    let p_hf_like = reference
        .dets()
        .iter()
        .zip(&weights)
        .filter(|(d, _)| d.excitation_rank(hf) <= 2)
        .map(|(_, w)| w)
        .sum();
    weights.sort_by(|a, b| b.total_cmp(a));
    let p_top10 = weights.iter().take(10).sum();
    Diagnostics { p_hf_like, p_top10 }
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Runs CVQE from the Hartree–Fock reference.
pub fn run_cvqe(h: &QubitHamiltonian, excs: &ExcitationList, n_electrons: usize, cfg: &CycleConfig) -> Result<RunTrajectory> {
    cfg.validate()?;
    let nq = h.n_qubits();
    let hf = hf_determinant(n_electrons, nq)?;
    let evaluator = Evaluator::new(h, excs, n_electrons)?;
    let floor = cfg.threshold_floor();

    let mut reference = ReferenceSet::single(hf);
    let mut theta = vec![0.0; excs.len()];
    let mut adamax = AdamaxState::new(1, cfg.adamax)?;
    let mut scheduler = RestartScheduler::new(cfg.restart)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut records = Vec::with_capacity(cfg.iters_per_cycle * cfg.max_cycles);
    let mut cycles = Vec::new();
    let mut best = f64::INFINITY;
    let mut stagnant = 0;
    let mut converged = false;
    let mut coeffs = Vec::new();

    for cycle in 1..=cfg.max_cycles {
        let best_at_start = best;
        let mut resets = Vec::new();
        for _ in 0..cfg.iters_per_cycle {
            let ev = evaluator.evaluate(&reference, &theta)?;
            best = best.min(ev.energy);

            theta = gd_step(&theta, &ev.grad_theta, cfg.theta_step_size)?;
            coeffs.clear();
            coeffs.extend_from_slice(reference.coeffs());
            adamax.step(&mut coeffs, &ev.grad_coeffs)?;
            reference.set_coeffs(&coeffs)?;
            reference.normalize()?;

            let iteration = records.len() + 1;
            let reset = scheduler.observe(l2(&ev.grad_coeffs));
            if let Some(reason) = reset {
                scheduler.apply(&mut adamax)?;
                resets.push((iteration, reason));
            }
            records.push(IterationRecord {
                iteration,
                cycle,
                energy: ev.energy,
                best_energy: best,
                n_dets_current: reference.len(),
                reset_flag: reset.is_some(),
                dets_added: 0,
            });
        }

        // expansion from the optimised trial state
        let ev = evaluator.evaluate(&reference, &theta)?;
        best = best.min(ev.energy);
        let grad_theta_norm = l2(&ev.grad_theta);
        let grad_coeffs_norm = l2(&ev.grad_coeffs);
        let p_threshold = compute_threshold(grad_theta_norm, cfg);
        let added = match cfg.selection_mode {
            SelectionMode::Disabled => Vec::new(),
            SelectionMode::Exact => {
                let probs = exact_probabilities(&ev.state, floor);
                select_determinants(&probs, p_threshold, &reference)
            }
            SelectionMode::Shots => {
                let counts = sample_counts_with(&ev.state, cfg.n_shots, &mut rng)?;
                let probs = counts
                    .into_iter()
                    .map(|(d, k)| (d, k as f64 / cfg.n_shots as f64))
                    .collect();
                select_determinants(&probs, p_threshold, &reference)
            }
        };
        let init = initialize_new_coefficients(added.len(), grad_coeffs_norm, cfg, &mut rng);
        for (&d, &c) in added.iter().zip(&init) {
            reference.push(d, c)?;
        }
        adamax.grow(added.len());
        reference.normalize()?;

        let (pruned_ref, keep) = prune_reference(&reference, cfg.n_dets)?;
        let pruned: Vec<Determinant> = reference
            .dets()
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| !k)
            .map(|(&d, _)| d)
            .collect();
        let hf_pruned = pruned.contains(&hf);
        if hf_pruned {
            warn!("cycle {cycle}: Hartree-Fock determinant pruned from the reference");
        }
        adamax.retain_mask(&keep)?;
        reference = pruned_ref;

        if let Some(last) = records.last_mut() {
            last.dets_added = added.len();
        }
        let diag = diagnostics(&reference, &hf);
        debug!(
            "cycle {cycle}: E={:.10} best={best:.10} |g_theta|={grad_theta_norm:.3e} p_th={p_threshold:.3e} \
             +{} -{} n_dets={}",
            ev.energy,
            added.len(),
            pruned.len(),
            reference.len()
        );
        cycles.push(CycleEvent {
            cycle,
            energy: ev.energy,
            best_energy: best,
            grad_theta_norm,
            grad_coeffs_norm,
            p_threshold,
            added,
            pruned,
            hf_pruned,
            resets,
            diagnostics: diag,
        });

        if best_at_start - best < cfg.energy_tol {
            stagnant += 1;
        } else {
            stagnant = 0;
        }
        if stagnant >= 2 {
            converged = true;
            break;
        }
    }

    let final_energy = evaluator.energy(&reference, &theta)?;
    best = best.min(final_energy);
    info!(
        "finished after {} cycles: E={final_energy:.10} best={best:.10} n_dets={}",
        cycles.len(),
        reference.len()
    );
    Ok(RunTrajectory {
        records,
        cycles,
        reference,
        theta,
        hf,
        final_energy,
        best_energy: best,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det(s: &str) -> Determinant {
        s.parse().unwrap()
    }

    fn cfg() -> CycleConfig {
        CycleConfig::default()
    }

    #[test]
    fn threshold_clamps() {
        let c = CycleConfig {
            threshold_scale: 0.1,
            threshold_ceiling: 0.5,
            ..cfg()
        };
        assert_eq!(compute_threshold(0.0, &c), c.threshold_floor());
        assert!((compute_threshold(2.0, &c) - 0.2).abs() < 1e-15);
        assert_eq!(compute_threshold(1e6, &c), 0.5);
    }

    #[test]
    fn default_floor() {
        assert_eq!(cfg().threshold_floor(), 1e-4);
        let c = CycleConfig { n_shots: 1000, ..cfg() };
        assert_eq!(c.threshold_floor(), 1e-3);
        assert_eq!(c.resolved().threshold_floor, Some(1e-3));
    }

    #[test]
    fn selection_filters_and_orders() {
        let current = ReferenceSet::single(det("1100"));
        let mut probs = BTreeMap::new();
        probs.insert(det("1100"), 0.6);
        probs.insert(det("0011"), 0.3);
        probs.insert(det("0110"), 0.05);
        assert_eq!(select_determinants(&probs, 0.1, &current), vec![det("0011")]);
        assert!(select_determinants(&probs, 0.7, &current).is_empty());

        probs.insert(det("1010"), 0.3);
        probs.insert(det("1110"), 0.9);
        // ties broken by ascending bitmask: 1010 = 0b0101 < 0011 = 0b1100
        assert_eq!(
            select_determinants(&probs, 0.1, &current),
            vec![det("1010"), det("0011")]
        );
    }

    #[test]
    fn coefficient_initialisation_bounds_and_determinism() {
        let c = CycleConfig {
            coeff_init_scale: 0.1,
            ..cfg()
        };
        let mut r1 = ChaCha8Rng::seed_from_u64(11);
        let mut r2 = ChaCha8Rng::seed_from_u64(11);
        let a = initialize_new_coefficients(50, 0.4, &c, &mut r1);
        let b = initialize_new_coefficients(50, 0.4, &c, &mut r2);
        assert_eq!(a, b);
        assert!(a.iter().all(|x| x.abs() < 0.04));
        let z = initialize_new_coefficients(20, 0.0, &c, &mut r1);
        assert!(z.iter().all(|x| x.abs() < 1e-4 && *x != 0.0));
    }

    #[test]
    fn coefficient_mean_is_centred() {
        let c = CycleConfig {
            coeff_init_scale: 1.0,
            ..cfg()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 10_000;
        let xs = initialize_new_coefficients(n, 1.0, &c, &mut rng);
        let mean = xs.iter().sum::<f64>() / n as f64;
        // U(-1, 1) has variance 1/3
        let sigma = (1.0 / 3.0 / n as f64).sqrt();
        assert!(mean.abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn pruning_drops_smallest() {
        let r = ReferenceSet::new(
            vec![det("1100"), det("0011"), det("1010")],
            vec![0.9, 0.3, 0.1],
        )
        .unwrap();
        let (p, keep) = prune_reference(&r, 2).unwrap();
        assert_eq!(keep, vec![true, true, false]);
        assert_eq!(p.dets(), &[det("1100"), det("0011")]);
        assert!((p.norm() - 1.0).abs() < 1e-15);
        let (same, _) = prune_reference(&r, 3).unwrap();
        assert_eq!(same, r);
        assert!(prune_reference(&r, 0).is_err());
    }

    #[test]
    fn pruning_has_no_hf_exception_and_keeps_earliest_on_ties() {
        let r = ReferenceSet::new(
            vec![det("1100"), det("0011"), det("1010")],
            vec![0.1, 0.5, 0.5],
        )
        .unwrap();
        let (p, _) = prune_reference(&r, 1).unwrap();
        assert_eq!(p.dets(), &[det("0011")]);
    }

    #[test]
    fn diagnostic_weights() {
        let hf = det("1100");
        let d = diagnostics(&ReferenceSet::single(hf), &hf);
        assert_eq!((d.p_hf_like, d.p_top10), (1.0, 1.0));

        // 20 equal weights over six-electron determinants
        let hf6 = det("111111000000");
        let dets: Vec<Determinant> = (0u64..1 << 12)
            .filter(|b| b.count_ones() == 6)
            .take(20)
            .map(|b| Determinant::new(b, 12))
            .collect();
        let r = ReferenceSet::new(dets, vec![1.0; 20]).unwrap();
        let d = diagnostics(&r, &hf6);
        assert!((d.p_top10 - 0.5).abs() < 1e-14);

        // a quadruple excitation is not HF-like
        let r = ReferenceSet::new(vec![hf, det("0011")], vec![0.6, 0.8]).unwrap();
        assert!((diagnostics(&r, &hf).p_hf_like - 1.0).abs() < 1e-14);
        let hf3 = det("111000");
        let far = det("000111");
        let r = ReferenceSet::new(vec![hf3, far], vec![0.6, 0.8]).unwrap();
        assert!((diagnostics(&r, &hf3).p_hf_like - 0.36).abs() < 1e-14);
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        assert!(CycleConfig { iters_per_cycle: 0, ..cfg() }.validate().is_err());
        assert!(CycleConfig { n_dets: 0, ..cfg() }.validate().is_err());
        assert!(CycleConfig { threshold_ceiling: 1e-5, ..cfg() }.validate().is_err());
        assert!(CycleConfig { threshold_ceiling: 1.5, ..cfg() }.validate().is_err());
        assert!(CycleConfig { theta_step_size: 0.0, ..cfg() }.validate().is_err());
    }
}
