//! Engine hot paths. Run once with default features and once with
//! `--no-default-features`, saving criterion baselines, to compare the
//! rayon and sequential builds:
//!
//! ```text
//! cargo bench -p cvqe-core --bench engine -- --save-baseline parallel
//! cargo bench -p cvqe-core --bench engine --no-default-features -- --baseline parallel
//! ```

use std::path::PathBuf;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cvqe::statevector::{apply_uccsd, expectation, Evaluator};
use cvqe::{
    build_qubit_hamiltonian, enumerate_excitations, fci_ground_energy, hf_determinant, parse_fcidump,
    QubitHamiltonian, ReferenceSet, SectorBasis, StateVector,
};

const MODE: &str = if cfg!(feature = "parallel") { "parallel" } else { "sequential" };

fn load(name: &str) -> (QubitHamiltonian, usize) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/{name}.FCIDUMP"));
    let ints = parse_fcidump(&std::fs::read_to_string(path).unwrap()).unwrap();
    (build_qubit_hamiltonian(&ints).unwrap(), ints.n_electrons())
}

fn engine(c: &mut Criterion) {
    let mut group = c.benchmark_group(format!("engine/{MODE}"));
    group.sample_size(20);
    for name in ["h6_2.5", "beh2_1.3"] {
        let (h, ne) = load(name);
        let nq = h.n_qubits();
        let excs = enumerate_excitations(ne, nq).unwrap();
        let theta: Vec<f64> = (0..excs.len()).map(|k| 0.01 * ((k % 7) as f64 - 3.0)).collect();
        let reference = ReferenceSet::single(hf_determinant(ne, nq).unwrap());

        let ev = Evaluator::new(&h, &excs, ne).unwrap();
        group.bench_function(BenchmarkId::new("evaluate", name), |b| {
            b.iter(|| ev.evaluate(&reference, &theta).unwrap())
        });

        let mut state = StateVector::basis(hf_determinant(ne, nq).unwrap()).unwrap();
        apply_uccsd(&mut state, &theta, &excs).unwrap();
        group.bench_function(BenchmarkId::new("expectation", name), |b| {
            b.iter(|| expectation(&state, &h).unwrap())
        });

        let sector = SectorBasis::particle_number(nq, ne).unwrap();
        group.bench_function(BenchmarkId::new("lanczos", name), |b| {
            b.iter(|| fci_ground_energy(&h, &sector).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, engine);
criterion_main!(benches);
