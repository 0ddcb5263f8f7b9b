mod common;

use common::*;
use cvqe::excitation::Excitation;
use cvqe::statevector::{
    apply_excitation_exponential, apply_uccsd, exact_probabilities, expectation, prepare_reference,
    sample_counts, Evaluator,
};
use cvqe::{enumerate_excitations, hf_determinant, Determinant, ReferenceSet, StateVector};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state<R: Rng>(n_qubits: usize, rng: &mut R) -> StateVector {
    let amps: Vec<Complex64> = (0..1usize << n_qubits)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(n_qubits, amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

#[test]
fn closed_form_matches_dense_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (n, ne) in [(4, 2), (6, 2), (6, 4)] {
        let excs = enumerate_excitations(ne, n).unwrap();
        for exc in excs.iter() {
            let theta: f64 = rng.random_range(-3.0..3.0);
            let kappa = to_matrix(exc.generator(n).unwrap().to_dense(), n);
            let expm = (kappa * Complex64::new(theta, 0.0)).exp();
            let psi = random_state(n, &mut rng);
            let mut out = psi.clone();
            apply_excitation_exponential(&mut out, exc, theta).unwrap();
            let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
            let want = expm * v;
            let diff = out
                .amplitudes()
                .iter()
                .zip(want.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-10, "{exc:?} theta={theta} diff={diff}");
        }
    }
}

#[test]
fn quarter_turn_single_sign_matches_dense() {
    let exc = Excitation::single(0, 2).unwrap();
    let mut s = StateVector::basis("1100".parse().unwrap()).unwrap();
    apply_excitation_exponential(&mut s, &exc, std::f64::consts::FRAC_PI_2).unwrap();
    let kappa = to_matrix(exc.generator(4).unwrap().to_dense(), 4);
    let u = (kappa * Complex64::new(std::f64::consts::FRAC_PI_2, 0.0)).exp();
    let target: Determinant = "0110".parse().unwrap();
    let dense = u[(target.occupation() as usize, 0b0011)];
    let got = s.amplitude(&target);
    assert!((got - dense).norm() < 1e-12);
    assert!((got.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn h2_trial_state_is_two_determinant_rotation() {
    let excs = enumerate_excitations(2, 4).unwrap();
    assert_eq!(excs.n_doubles(), 1);
    let td = 0.37;
    let mut params = vec![0.0; excs.len()];
    params[0] = td;
    let mut s = StateVector::basis("1100".parse().unwrap()).unwrap();
    apply_uccsd(&mut s, &params, &excs).unwrap();
    let hf = s.amplitude(&"1100".parse().unwrap());
    let dd = s.amplitude(&"0011".parse().unwrap());
    assert!((hf.re - td.cos()).abs() < 1e-14 && hf.im.abs() < 1e-14);
    assert!((dd.norm() - td.sin()).abs() < 1e-14 && dd.im.abs() < 1e-14);
    // dense oracle
    let kappa = to_matrix(excs.as_slice()[0].generator(4).unwrap().to_dense(), 4);
    let u = (kappa * Complex64::new(td, 0.0)).exp();
    assert!((u[(0b1100, 0b0011)] - dd).norm() < 1e-12);
}

#[test]
fn unitarity_over_a_thousand_gates() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 8;
    let excs = enumerate_excitations(4, n).unwrap();
    let mut s = random_state(n, &mut rng);
    for _ in 0..1000 {
        let k = rng.random_range(0..excs.len());
        apply_excitation_exponential(&mut s, &excs.as_slice()[k], rng.random_range(-3.0..3.0)).unwrap();
    }
    assert!((s.norm() - 1.0).abs() < 1e-12, "drift {}", (s.norm() - 1.0).abs());
}

#[test]
fn particle_number_is_conserved() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, ne) in [(4, 2), (8, 4), (12, 6)] {
        let excs = enumerate_excitations(ne, n).unwrap();
        let theta: Vec<f64> = (0..excs.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut s = StateVector::basis(hf_determinant(ne, n).unwrap()).unwrap();
        apply_uccsd(&mut s, &theta, &excs).unwrap();
        assert!(s.leakage(ne) <= 1e-12);
        let outside: f64 = s
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(b, _)| (*b as u64).count_ones() as usize != ne)
            .map(|(_, a)| a.norm())
            .fold(0.0, f64::max);
        assert_eq!(outside, 0.0);
    }
}

#[test]
fn sampling_total_variation() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let s = random_state(4, &mut rng);
    let shots = 1_000_000u64;
    let counts = sample_counts(&s, shots, 99).unwrap();
    assert_eq!(counts.values().sum::<u64>(), shots);
    let exact = exact_probabilities(&s, 0.0);
    let tv: f64 = exact
        .iter()
        .map(|(d, p)| (counts.get(d).copied().unwrap_or(0) as f64 / shots as f64 - p).abs())
        .sum::<f64>()
        / 2.0;
    assert!(tv < 5e-3, "tv {tv}");
}

#[test]
fn sampling_is_reproducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let s = random_state(6, &mut rng);
    assert_eq!(sample_counts(&s, 100_000, 3).unwrap(), sample_counts(&s, 100_000, 3).unwrap());
    assert_ne!(sample_counts(&s, 100_000, 3).unwrap(), sample_counts(&s, 100_000, 4).unwrap());
}

#[test]
fn uniform_two_qubit_probabilities() {
    let amps = vec![Complex64::new(0.5, 0.0); 4];
    let s = StateVector::from_amplitudes(2, amps).unwrap();
    let p = exact_probabilities(&s, 0.0);
    assert_eq!(p.len(), 4);
    assert!(p.values().all(|&x| (x - 0.25).abs() < 1e-15));
}

#[test]
fn hf_expectation_matches_oracle() {
    let (ints, h) = load_fixture("h2_0.735");
    let hf = hf_determinant(ints.n_electrons(), h.n_qubits()).unwrap();
    let s = prepare_reference(&ReferenceSet::single(hf), h.n_qubits()).unwrap();
    let e = expectation(&s, &h).unwrap();
    let oracle = cvqe::hf_energy(&h, &hf).unwrap();
    assert!((e - oracle).abs() < 1e-10);
}

#[test]
fn beh2_first_reference() {
    let (ints, h) = load_fixture("beh2_1.3");
    let hf = hf_determinant(ints.n_electrons(), h.n_qubits()).unwrap();
    let s = prepare_reference(&ReferenceSet::single(hf), 14).unwrap();
    assert_eq!(s.amplitudes()[0b111111].re, 1.0);
    assert_eq!(s.norm_sqr(), 1.0);
}

#[test]
fn evaluator_energy_matches_dense_expectation() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ints = random_integrals(3, 2, &mut rng);
    let h = cvqe::build_qubit_hamiltonian(&ints).unwrap();
    let excs = enumerate_excitations(2, 6).unwrap();
    let ev = Evaluator::new(&h, &excs, 2).unwrap();
    let theta: Vec<f64> = (0..excs.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let r = ReferenceSet::new(
        vec!["110000".parse().unwrap(), "001100".parse().unwrap(), "100100".parse().unwrap()],
        vec![0.8, -0.5, 0.3],
    )
    .unwrap();
    let got = ev.energy(&r, &theta).unwrap();
    let mut s = prepare_reference(&r, 6).unwrap();
    apply_uccsd(&mut s, &theta, &excs).unwrap();
    let m = direct_dense(&ints);
    let v = nalgebra::DVector::from_column_slice(s.amplitudes());
    let want = (v.adjoint() * &m * &v)[(0, 0)].re / v.norm_squared();
    assert!((got - want).abs() < 1e-12, "{got} vs {want}");
}

#[test]
fn h6_excitation_counts_match_brute_force() {
    let n = 12;
    let ne = 6;
    let excs = enumerate_excitations(ne, n).unwrap();
    assert_eq!(excs.n_singles(), 18);
    let spin = |q: usize| q % 2;
    let mut doubles = 0;
    for i in 0..ne {
        for j in 0..ne {
            for a in ne..n {
                for b in ne..n {
                    if i < j && a < b && spin(i) + spin(j) == spin(a) + spin(b) {
                        doubles += 1;
                    }
                }
            }
        }
    }
    assert_eq!(excs.n_doubles(), doubles);
    assert_eq!(enumerate_excitations(ne, n).unwrap(), excs);
}

#[test]
fn excitations_are_distinct_and_stay_in_sector() {
    let excs = enumerate_excitations(6, 14).unwrap();
    let hf = hf_determinant(6, 14).unwrap();
    let mut seen = std::collections::BTreeSet::new();
    for e in excs.iter() {
        assert!(seen.insert((e.from().to_vec(), e.to().to_vec())));
        let (_, b) = e.apply_to_basis(hf.occupation()).expect("acts on HF");
        assert_eq!(b.count_ones(), 6);
    }
}

#[test]
fn generators_commute_with_number_and_spin() {
    let n = 6;
    let num = number_operator(n);
    let sz = sz_operator(n);
    for ne in [2, 4] {
        for exc in enumerate_excitations(ne, n).unwrap().iter() {
            let k: DMatrix<Complex64> = to_matrix(exc.generator(n).unwrap().to_dense(), n);
            assert!((&k * &num - &num * &k).norm() < 1e-12);
            assert!((&k * &sz - &sz * &k).norm() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponential_is_norm_preserving(seed in any::<u64>(), theta in -6.0f64..6.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let excs = enumerate_excitations(2, 6).unwrap();
        let k = rng.random_range(0..excs.len());
        let mut s = random_state(6, &mut rng);
        apply_excitation_exponential(&mut s, &excs.as_slice()[k], theta).unwrap();
        prop_assert!((s.norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn opposite_angles_cancel(seed in any::<u64>(), theta in -6.0f64..6.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let excs = enumerate_excitations(4, 8).unwrap();
        let exc = &excs.as_slice()[rng.random_range(0..excs.len())];
        let s0 = random_state(8, &mut rng);
        let mut s = s0.clone();
        apply_excitation_exponential(&mut s, exc, theta).unwrap();
        apply_excitation_exponential(&mut s, exc, -theta).unwrap();
        let err = s.amplitudes().iter().zip(s0.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-13);
    }
}
