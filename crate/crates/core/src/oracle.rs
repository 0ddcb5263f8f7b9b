//! Exact reference energies: FCI by Lanczos on a particle-number sector, and
//! Hartree–Fock as a diagonal element.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hamiltonian::QubitHamiltonian;
use crate::par;
pub use crate::sector::SectorBasis;
use crate::sector::{PauliSectorAction, SectorOperator};
use crate::statevector::Determinant;

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Ritz residual `‖Hv − λv‖` at which the ground state counts as converged.
    pub residual_tol: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            residual_tol: 1e-9,
            max_iterations: 1000,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub residual: f64,
    pub iterations: usize,
    /// Ground-state vector in sector coordinates.
    pub vector: Vec<Complex64>,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    par::chunked_sum(a.len(), Complex64::default(), |r| {
        a[r.clone()].iter().zip(&b[r]).map(|(x, y)| x.conj() * y).sum()
    })
}

fn norm(a: &[Complex64]) -> f64 {
    dot(a, a).re.sqrt()
}

/// Lowest eigenpair of `op` by Lanczos with full reorthogonalisation.
pub fn lanczos_ground_state(op: &dyn SectorOperator, opts: &LanczosOptions) -> Result<GroundState> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::invalid("empty sector"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, 0.0))
        .collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let m_max = opts.max_iterations.min(n).max(1);
    let mut basis: Vec<Vec<Complex64>> = vec![v];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![Complex64::default(); n];
    let mut best = (f64::INFINITY, f64::INFINITY);

    for j in 0..m_max {
        op.apply(&basis[j], &mut w);
        let a = dot(&basis[j], &w).re;
        alpha.push(a);
        // full reorthogonalisation, twice for stability
        for _ in 0..2 {
            for q in &basis {
                let proj = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= proj * qi;
                }
            }
        }
        let b = norm(&w);

        let k = alpha.len();
        let t = DMatrix::from_fn(k, k, |r, c| {
            if r == c {
                alpha[r]
            } else if r + 1 == c {
                beta[r]
            } else if c + 1 == r {
                beta[c]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let (idx, &theta) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty tridiagonal");
        let residual = (b * eig.eigenvectors[(k - 1, idx)]).abs();
        best = (theta, residual);

        let exhausted = b < 1e-12 || k == n;
        if residual < opts.residual_tol || exhausted {
            let coeffs = eig.eigenvectors.column(idx);
            let mut vector = vec![Complex64::default(); n];
            for (q, &c) in basis.iter().zip(coeffs.iter()) {
                for (vi, qi) in vector.iter_mut().zip(q) {
                    *vi += qi * c;
                }
            }
            let nv = norm(&vector);
            vector.iter_mut().for_each(|x| *x /= nv);
            return Ok(GroundState {
                energy: theta,
                residual,
                iterations: k,
                vector,
            });
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
    Err(Error::NotConverged {
        iterations: m_max,
        estimate: best.0,
        residual: best.1,
    })
}

/// FCI energy: lowest eigenvalue of `h` on `sector`, via term-by-term
/// Pauli action (no matrix is assembled).
pub fn fci_ground_energy(h: &QubitHamiltonian, sector: &SectorBasis) -> Result<f64> {
    Ok(fci_ground_state(h, sector, &LanczosOptions::default())?.energy)
}

pub fn fci_ground_state(h: &QubitHamiltonian, sector: &SectorBasis, opts: &LanczosOptions) -> Result<GroundState> {
    let op = PauliSectorAction::new(h, sector)?;
    lanczos_ground_state(&op, opts)
}

/// `⟨hf|H|hf⟩`.
pub fn hf_energy(h: &QubitHamiltonian, hf: &Determinant) -> Result<f64> {
    if hf.n_qubits() != h.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: h.n_qubits(),
            got: hf.n_qubits(),
        });
    }
    Ok(h.diagonal_element(hf.occupation()))
}

/// Dense Hermitian eigenvalues of `h` on `sector`, ascending. Small systems only.
pub fn dense_sector_spectrum(h: &QubitHamiltonian, sector: &SectorBasis) -> Result<Vec<f64>> {
    if sector.len() > 4096 {
        return Err(Error::invalid("sector too large for dense diagonalisation"));
    }
    let n = sector.len();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for (j, &col) in sector.states().iter().enumerate() {
        for &(c, p) in h.terms() {
            let (ph, row) = p.apply_to_basis(col);
            if let Some(i) = sector.index_of(row) {
                m[(i, j)] += ph * c;
            }
        }
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}
