//! Second-quantised molecular Hamiltonian and its Jordan–Wigner image.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fcidump::OrbitalIntegrals;
use crate::pauli::{PauliString, PauliSum};

/// Terms whose |coefficient| falls at or below this are dropped after merging.
pub const PRUNE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create,
    Annihilate,
}

/// Jordan–Wigner image of a single ladder operator on spin orbital `mode`.
///
/// `a†_j = Z_0…Z_{j-1} (X_j − iY_j)/2` and `a_j = Z_0…Z_{j-1} (X_j + iY_j)/2`.
pub fn jordan_wigner(kind: Ladder, mode: usize, n_qubits: usize) -> Result<PauliSum> {
    if mode >= n_qubits {
        return Err(Error::OutOfBounds {
            what: "spin orbitals",
            index: mode,
            len: n_qubits,
        });
    }
    let parity = (1u64 << mode) - 1;
    let bit = 1u64 << mode;
    let x = PauliString::from_masks(n_qubits, bit, parity)?;
    let y = PauliString::from_masks(n_qubits, bit, parity | bit)?;
    let y_weight = match kind {
        Ladder::Create => -0.5,
        Ladder::Annihilate => 0.5,
    };
    let mut out = PauliSum::from_term(Complex64::new(0.5, 0.0), x);
    out.add_term(Complex64::new(0.0, y_weight), y);
    Ok(out)
}

/// Product of ladder operators, leftmost first, mapped to qubits.
pub fn fermion_product(ops: &[(Ladder, usize)], n_qubits: usize) -> Result<PauliSum> {
    let mut acc = PauliSum::identity(n_qubits, 1.0);
    for &(kind, mode) in ops {
        acc = &acc * &jordan_wigner(kind, mode, n_qubits)?;
    }
    acc.simplify(PRUNE_TOL);
    Ok(acc)
}

/// Qubit index of spatial orbital `p` with spin `sigma` (0 = α, 1 = β).
#[inline]
pub fn spin_orbital(p: usize, sigma: usize) -> usize {
    2 * p + sigma
}

/// Real-weighted sum of Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitHamiltonian {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl QubitHamiltonian {
    /// Merges duplicates and prunes small terms.
    pub fn new(n_qubits: usize, terms: impl IntoIterator<Item = (f64, PauliString)>) -> Result<Self> {
        let mut sum = PauliSum::zero(n_qubits);
        for (c, p) in terms {
            if p.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: n_qubits,
                    got: p.n_qubits(),
                });
            }
            sum.add_term(Complex64::new(c, 0.0), p);
        }
        Self::from_pauli_sum(&sum)
    }

    /// Converts a Hermitian Pauli sum, rejecting imaginary weights ≥ 1e-12.
    pub fn from_pauli_sum(sum: &PauliSum) -> Result<Self> {
        let mut terms = Vec::with_capacity(sum.len());
        for (c, p) in sum.terms() {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::NonFinite("Hamiltonian coefficient"));
            }
            if c.im.abs() >= PRUNE_TOL {
                return Err(Error::ComplexCoefficient {
                    term: p.to_string(),
                    imag: c.im,
                });
            }
            if c.re.abs() > PRUNE_TOL {
                terms.push((c.re, p));
            }
        }
        Ok(QubitHamiltonian {
            n_qubits: sum.n_qubits(),
            terms,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_pauli_sum(&self) -> PauliSum {
        let mut s = PauliSum::zero(self.n_qubits);
        for &(c, p) in &self.terms {
            s.add_term(Complex64::new(c, 0.0), p);
        }
        s
    }

    /// Coefficient of the identity string.
    pub fn constant(&self) -> f64 {
        self.terms
            .iter()
            .find(|(_, p)| p.is_identity())
            .map_or(0.0, |(c, _)| *c)
    }

    /// Adds `shift · I`.
    pub fn shifted(&self, shift: f64) -> Result<Self> {
        let id = PauliString::identity(self.n_qubits);
        Self::new(
            self.n_qubits,
            self.terms.iter().copied().chain(std::iter::once((shift, id))),
        )
    }

    /// `⟨b|H|b⟩` for a computational basis state.
    pub fn diagonal_element(&self, b: u64) -> f64 {
        self.terms
            .iter()
            .filter(|(_, p)| p.x_mask() == 0)
            .map(|(c, p)| c * p.apply_to_basis(b).0.re)
            .sum()
    }
}

/// Builds `H = Σ h_pq a†_pσ a_qσ + ½ Σ (pr|qs) a†_pσ a†_qτ a_sτ a_rσ + E_core`
/// on `2·n_spatial` qubits with interleaved spin ordering.
pub fn build_qubit_hamiltonian(ints: &OrbitalIntegrals) -> Result<QubitHamiltonian> {
    let n = ints.n_spatial();
    let nq = 2 * n;
    if nq > crate::pauli::MAX_QUBITS {
        return Err(Error::invalid("too many orbitals for a 64-qubit register"));
    }
    let create: Vec<PauliSum> = (0..nq)
        .map(|j| jordan_wigner(Ladder::Create, j, nq))
        .collect::<Result<_>>()?;
    let annihilate: Vec<PauliSum> = (0..nq)
        .map(|j| jordan_wigner(Ladder::Annihilate, j, nq))
        .collect::<Result<_>>()?;

    let mut h = PauliSum::identity(nq, ints.e_core());

    // one-body: a†_i a_j, computed once per spin-orbital pair
    let mut hop = vec![None; nq * nq];
    let mut hopping = |i: usize, j: usize| -> PauliSum {
        hop[i * nq + j]
            .get_or_insert_with(|| &create[i] * &annihilate[j])
            .clone()
    };
    for p in 0..n {
        for q in 0..n {
            let hpq = ints.h(p, q);
            if hpq == 0.0 {
                continue;
            }
            for sigma in 0..2 {
                let mut t = hopping(spin_orbital(p, sigma), spin_orbital(q, sigma));
                t.scale(Complex64::new(hpq, 0.0));
                h += &t;
            }
        }
    }

    // two-body: (a†_P a†_Q)(a_S a_R)
    let pair_create = |i: usize, j: usize| &create[i] * &create[j];
    let pair_annihilate = |i: usize, j: usize| &annihilate[i] * &annihilate[j];
    let mut cc = vec![None; nq * nq];
    let mut aa = vec![None; nq * nq];
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = ints.v_chem(p, r, q, s);
                    if v == 0.0 {
                        continue;
                    }
                    for sigma in 0..2 {
                        for tau in 0..2 {
                            let (pp, qq) = (spin_orbital(p, sigma), spin_orbital(q, tau));
                            let (ss, rr) = (spin_orbital(s, tau), spin_orbital(r, sigma));
                            if pp == qq || ss == rr {
                                continue;
                            }
                            let left: &PauliSum = cc[pp * nq + qq]
                                .get_or_insert_with(|| pair_create(pp, qq));
                            let right: &PauliSum = aa[ss * nq + rr]
                                .get_or_insert_with(|| pair_annihilate(ss, rr));
                            let mut t = left * right;
                            t.scale(Complex64::new(0.5 * v, 0.0));
                            h += &t;
                        }
                    }
                }
            }
        }
    }
    h.simplify(PRUNE_TOL);
    QubitHamiltonian::from_pauli_sum(&h)
}
