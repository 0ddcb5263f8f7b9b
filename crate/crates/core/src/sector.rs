//! Fixed-particle-number bases and Hamiltonian action restricted to them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::QubitHamiltonian;
use crate::par;
use crate::pauli::PauliString;

const ABSENT: u32 = u32::MAX;

/// Practical ceiling for dense 2^n position tables.
pub const MAX_SECTOR_QUBITS: usize = 26;

/// Basis states with a fixed popcount (optionally a fixed Sz), ascending.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    n_qubits: usize,
    n_electrons: Option<usize>,
    states: Vec<u64>,
    position: Vec<u32>,
}

impl SectorBasis {
    /// Every state with `n_electrons` set bits.
    pub fn particle_number(n_qubits: usize, n_electrons: usize) -> Result<Self> {
        Self::filtered(n_qubits, Some(n_electrons), |b| {
            b.count_ones() as usize == n_electrons
        })
    }

    /// Particle number plus `2·Sz = n_α − n_β` (even qubits α, odd qubits β).
    pub fn with_sz(n_qubits: usize, n_electrons: usize, ms2: i32) -> Result<Self> {
        let alpha = 0x5555_5555_5555_5555u64;
        Self::filtered(n_qubits, Some(n_electrons), |b| {
            let na = (b & alpha).count_ones() as i32;
            let nb = (b & !alpha).count_ones() as i32;
            (na + nb) as usize == n_electrons && na - nb == ms2
        })
    }

    /// The whole 2^n space.
    pub fn full(n_qubits: usize) -> Result<Self> {
        Self::filtered(n_qubits, None, |_| true)
    }

    fn filtered(n_qubits: usize, n_electrons: Option<usize>, keep: impl Fn(u64) -> bool) -> Result<Self> {
        if n_qubits > MAX_SECTOR_QUBITS {
            return Err(Error::invalid(format!(
                "{n_qubits} qubits exceeds the {MAX_SECTOR_QUBITS}-qubit sector limit"
            )));
        }
        if n_electrons.is_some_and(|k| k > n_qubits) {
            return Err(Error::invalid("more electrons than qubits"));
        }
        let dim = 1u64 << n_qubits;
        let mut position = vec![ABSENT; dim as usize];
        let mut states = Vec::new();
        for b in 0..dim {
            if keep(b) {
                position[b as usize] = states.len() as u32;
                states.push(b);
            }
        }
        Ok(SectorBasis {
            n_qubits,
            n_electrons,
            states,
            position,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_electrons(&self) -> Option<usize> {
        self.n_electrons
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    #[inline]
    pub fn index_of(&self, b: u64) -> Option<usize> {
        match self.position.get(b as usize) {
            Some(&p) if p != ABSENT => Some(p as usize),
            _ => None,
        }
    }

    /// Copies the sector amplitudes out of a full 2^n vector.
    pub fn gather(&self, full: &[Complex64], out: &mut [Complex64]) {
        for (o, &b) in out.iter_mut().zip(&self.states) {
            *o = full[b as usize];
        }
    }

    /// Writes sector amplitudes into a full 2^n vector (other entries untouched).
    pub fn scatter(&self, compact: &[Complex64], full: &mut [Complex64]) {
        for (&v, &b) in compact.iter().zip(&self.states) {
            full[b as usize] = v;
        }
    }
}

/// A Hermitian operator acting on sector-compressed vectors.
pub trait SectorOperator: Sync {
    fn dim(&self) -> usize;

    /// `y ← A x`.
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]);
}

/// Pauli terms grouped by X mask; within a group the action is one permutation
/// `b ↦ b ⊕ x` with a basis-dependent weight.
#[derive(Debug, Clone)]
struct XGroups {
    x_masks: Vec<u64>,
    /// `offsets[g]..offsets[g+1]` indexes `terms` for group `g`.
    offsets: Vec<usize>,
    terms: Vec<(f64, PauliString)>,
}

impl XGroups {
    fn new(h: &QubitHamiltonian) -> Self {
        let mut terms = h.terms().to_vec();
        terms.sort_by_key(|(_, p)| (p.x_mask(), p.z_mask()));
        let mut x_masks = Vec::new();
        let mut offsets = Vec::new();
        for (i, (_, p)) in terms.iter().enumerate() {
            if x_masks.last() != Some(&p.x_mask()) {
                x_masks.push(p.x_mask());
                offsets.push(i);
            }
        }
        offsets.push(terms.len());
        XGroups {
            x_masks,
            offsets,
            terms,
        }
    }

    /// `⟨row|H|row ⊕ x_g⟩` for group `g`.
    #[inline]
    fn element(&self, g: usize, row: u64) -> Complex64 {
        let col = row ^ self.x_masks[g];
        let mut v = Complex64::default();
        for (c, p) in &self.terms[self.offsets[g]..self.offsets[g + 1]] {
            v += *c * p.apply_to_basis(col).0;
        }
        v
    }
}

/// Term-by-term Pauli action on a sector; no matrix is stored.
pub struct PauliSectorAction<'a> {
    basis: &'a SectorBasis,
    groups: XGroups,
}

impl<'a> PauliSectorAction<'a> {
    pub fn new(h: &QubitHamiltonian, basis: &'a SectorBasis) -> Result<Self> {
        if h.n_qubits() != basis.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: basis.n_qubits(),
                got: h.n_qubits(),
            });
        }
        Ok(PauliSectorAction {
            basis,
            groups: XGroups::new(h),
        })
    }
}

impl SectorOperator for PauliSectorAction<'_> {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let states = self.basis.states();
        par::for_each_chunk_mut(y, |off, out| {
            for (k, yi) in out.iter_mut().enumerate() {
                let row = states[off + k];
                let mut acc = Complex64::default();
                for g in 0..self.groups.x_masks.len() {
                    if let Some(j) = self.basis.index_of(row ^ self.groups.x_masks[g]) {
                        acc += self.groups.element(g, row) * x[j];
                    }
                }
                *yi = acc;
            }
        });
    }
}

/// Compressed-sparse-row Hamiltonian on a sector.
#[derive(Debug, Clone)]
pub struct SparseSectorMatrix {
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<Complex64>,
}

impl SparseSectorMatrix {
    pub fn new(h: &QubitHamiltonian, basis: &SectorBasis) -> Result<Self> {
        if h.n_qubits() != basis.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: basis.n_qubits(),
                got: h.n_qubits(),
            });
        }
        let groups = XGroups::new(h);
        let mut row_ptr = Vec::with_capacity(basis.len() + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        let mut row_entries: Vec<(u32, Complex64)> = Vec::new();
        for &row in basis.states() {
            row_entries.clear();
            for g in 0..groups.x_masks.len() {
                if let Some(j) = basis.index_of(row ^ groups.x_masks[g]) {
                    let v = groups.element(g, row);
                    if v != Complex64::default() {
                        row_entries.push((j as u32, v));
                    }
                }
            }
            row_entries.sort_by_key(|e| e.0);
            for &(j, v) in &row_entries {
                cols.push(j);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Ok(SparseSectorMatrix {
            row_ptr,
            cols,
            vals,
        })
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim() {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.cols[k] as usize;
                let back = self.get(j, i);
                worst = worst.max((self.vals[k] - back.conj()).norm());
            }
        }
        worst
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let row = &self.cols[self.row_ptr[i]..self.row_ptr[i + 1]];
        match row.binary_search(&(j as u32)) {
            Ok(k) => self.vals[self.row_ptr[i] + k],
            Err(_) => Complex64::default(),
        }
    }
}

impl SectorOperator for SparseSectorMatrix {
    fn dim(&self) -> usize {
        self.row_ptr.len() - 1
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        par::for_each_chunk_mut(y, |off, out| {
            for (k, yi) in out.iter_mut().enumerate() {
                let i = off + k;
                let mut acc = Complex64::default();
                for e in self.row_ptr[i]..self.row_ptr[i + 1] {
                    acc += self.vals[e] * x[self.cols[e] as usize];
                }
                *yi = acc;
            }
        });
    }
}
