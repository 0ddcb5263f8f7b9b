#![allow(dead_code)]

use std::path::PathBuf;

use cvqe::{build_qubit_hamiltonian, parse_fcidump, OrbitalIntegrals, QubitHamiltonian};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.FCIDUMP"))
}

pub fn load_fixture(name: &str) -> (OrbitalIntegrals, QubitHamiltonian) {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture present");
    let ints = parse_fcidump(&text).expect("fixture parses");
    let h = build_qubit_hamiltonian(&ints).expect("fixture maps");
    (ints, h)
}

/// Real integrals with the full eightfold symmetry and random values.
pub fn random_integrals<R: Rng>(n_spatial: usize, n_electrons: usize, rng: &mut R) -> OrbitalIntegrals {
    let mut ints = OrbitalIntegrals::zeros(n_spatial, n_electrons, 0).unwrap();
    for p in 0..n_spatial {
        for q in 0..=p {
            ints.set_one_body(p, q, rng.random_range(-1.0..1.0));
        }
    }
    for p in 0..n_spatial {
        for q in 0..n_spatial {
            for r in 0..n_spatial {
                for s in 0..n_spatial {
                    if (p, q) <= (r, s) && p >= q && r >= s {
                        ints.set_two_body(p, q, r, s, rng.random_range(-0.5..0.5));
                    }
                }
            }
        }
    }
    ints.set_e_core(rng.random_range(-1.0..1.0));
    ints
}

fn annihilate(j: usize, b: u64) -> Option<(f64, u64)> {
    if b >> j & 1 == 0 {
        return None;
    }
    let sign = if (b & ((1u64 << j) - 1)).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
    Some((sign, b ^ (1 << j)))
}

fn create(j: usize, b: u64) -> Option<(f64, u64)> {
    if b >> j & 1 == 1 {
        return None;
    }
    let sign = if (b & ((1u64 << j) - 1)).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
    Some((sign, b | (1 << j)))
}

/// Applies a string of ladder operators right to left. `true` = creation.
fn apply_string(ops: &[(bool, usize)], b: u64) -> Option<(f64, u64)> {
    let mut sign = 1.0;
    let mut state = b;
    for &(dagger, j) in ops.iter().rev() {
        let (s, next) = if dagger { create(j, state)? } else { annihilate(j, state)? };
        sign *= s;
        state = next;
    }
    Some((sign, state))
}

/// The second-quantized Hamiltonian assembled directly in the occupation
/// basis, spin orbital `2p + σ` on bit `2p + σ`.
pub fn direct_dense(ints: &OrbitalIntegrals) -> DMatrix<Complex64> {
    let n = ints.n_spatial();
    let nq = 2 * n;
    let dim = 1usize << nq;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    let so = |p: usize, s: usize| 2 * p + s;
    for col in 0..dim as u64 {
        m[(col as usize, col as usize)] += ints.e_core();
        for p in 0..n {
            for q in 0..n {
                for s in 0..2 {
                    if let Some((sg, row)) = apply_string(&[(true, so(p, s)), (false, so(q, s))], col) {
                        m[(row as usize, col as usize)] += sg * ints.h(p, q);
                    }
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let v = ints.v_chem(p, r, q, s);
                        if v == 0.0 {
                            continue;
                        }
                        for a in 0..2 {
                            for b in 0..2 {
                                let ops = [(true, so(p, a)), (true, so(q, b)), (false, so(s, b)), (false, so(r, a))];
                                if let Some((sg, row)) = apply_string(&ops, col) {
                                    m[(row as usize, col as usize)] += 0.5 * sg * v;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    m
}

pub fn to_matrix(dense: Vec<Complex64>, n_qubits: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n_qubits;
    DMatrix::from_row_slice(dim, dim, &dense)
}

pub fn number_operator(n_qubits: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n_qubits;
    DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new((i as u64).count_ones() as f64, 0.0)
        } else {
            Complex64::default()
        }
    })
}

/// Twice the total spin projection, α on even bits.
pub fn sz_operator(n_qubits: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n_qubits;
    let even: u64 = (0..n_qubits).step_by(2).map(|q| 1u64 << q).sum();
    DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            let b = i as u64;
            let v = (b & even).count_ones() as f64 - (b & !even).count_ones() as f64;
            Complex64::new(v, 0.0)
        } else {
            Complex64::default()
        }
    })
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Relative error between analytic gradients and central differences for a
/// random (H, θ, c) on `2 * n_spatial` qubits. Returns `(θ error, c error)`.
pub fn gradient_fd_errors(seed: u64, n_spatial: usize) -> (f64, f64) {
    use cvqe::enumerate_excitations;
    use cvqe::statevector::Evaluator;
    use cvqe::{Determinant, ReferenceSet};
    use rand::SeedableRng;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let nq = 2 * n_spatial;
    let ne = 2 * rng.random_range(1..n_spatial);
    let mut ints = random_integrals(n_spatial, ne, &mut rng);
    ints.set_e_core(0.0);
    let h = build_qubit_hamiltonian(&ints).unwrap();
    let excs = enumerate_excitations(ne, nq).unwrap();
    let ev = Evaluator::new(&h, &excs, ne).unwrap();

    let alpha: u64 = (0..nq).step_by(2).map(|q| 1u64 << q).sum();
    let sector: Vec<u64> = (0..1u64 << nq)
        .filter(|b| b.count_ones() as usize == ne && 2 * (b & alpha).count_ones() as usize == ne)
        .collect();
    // one determinant has an identically zero c-gradient
    let k = rng.random_range(2..=sector.len().min(4));
    let mut dets: Vec<Determinant> = Vec::new();
    while dets.len() < k {
        let d = Determinant::new(sector[rng.random_range(0..sector.len())], nq);
        if !dets.contains(&d) {
            dets.push(d);
        }
    }
    let coeffs: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
    let theta: Vec<f64> = (0..excs.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let r = ReferenceSet::new(dets.clone(), coeffs.clone()).unwrap();
    let eval = ev.evaluate(&r, &theta).unwrap();

    let step = 1e-6;
    let fd_theta: Vec<f64> = (0..theta.len())
        .map(|i| {
            let mut p = theta.clone();
            p[i] += step;
            let up = ev.energy(&r, &p).unwrap();
            p[i] -= 2.0 * step;
            let dn = ev.energy(&r, &p).unwrap();
            (up - dn) / (2.0 * step)
        })
        .collect();
    let fd_c: Vec<f64> = (0..k)
        .map(|i| {
            let mut c = coeffs.clone();
            c[i] += step;
            let up = ev.energy(&ReferenceSet::new(dets.clone(), c.clone()).unwrap(), &theta).unwrap();
            c[i] -= 2.0 * step;
            let dn = ev.energy(&ReferenceSet::new(dets.clone(), c).unwrap(), &theta).unwrap();
            (up - dn) / (2.0 * step)
        })
        .collect();
    (rel_err(&eval.grad_theta, &fd_theta), rel_err(&eval.grad_coeffs, &fd_c))
}

/// `‖a − b‖ / ‖b‖`, or the plain difference when `b` vanishes.
pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let scale = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}
