//! UCCSD excitations relative to the Hartree–Fock determinant.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::{fermion_product, Ladder};
use crate::pauli::{PauliSum, MAX_QUBITS};
use crate::statevector::Determinant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExcitationKind {
    Single,
    Double,
}

/// Moves electrons from occupied spin orbitals `from` to virtual ones `to`.
///
/// Both index lists are ascending. A single is `c†_p c_r` (to = [p],
/// from = [r]); a double is `c†_p c†_q c_r c_s` with to = [q, p] and
/// from = [s, r].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Excitation {
    from: Vec<usize>,
    to: Vec<usize>,
}

fn spin(mode: usize) -> usize {
    mode % 2
}

impl Excitation {
    pub fn single(from: usize, to: usize) -> Result<Self> {
        Self::new(vec![from], vec![to])
    }

    pub fn double(from: [usize; 2], to: [usize; 2]) -> Result<Self> {
        Self::new(from.to_vec(), to.to_vec())
    }

    fn new(mut from: Vec<usize>, mut to: Vec<usize>) -> Result<Self> {
        from.sort_unstable();
        to.sort_unstable();
        let mut all: Vec<usize> = from.iter().chain(&to).copied().collect();
        all.sort_unstable();
        all.dedup();
        if all.len() != from.len() + to.len() {
            return Err(Error::invalid("excitation indices must be distinct"));
        }
        if all.last().is_some_and(|&m| m >= MAX_QUBITS) {
            return Err(Error::invalid("excitation index beyond register limit"));
        }
        let mut sf: Vec<_> = from.iter().map(|&m| spin(m)).collect();
        let mut st: Vec<_> = to.iter().map(|&m| spin(m)).collect();
        sf.sort_unstable();
        st.sort_unstable();
        if sf != st {
            return Err(Error::invalid("excitation does not conserve Sz"));
        }
        Ok(Excitation { from, to })
    }

    pub fn kind(&self) -> ExcitationKind {
        if self.from.len() == 1 {
            ExcitationKind::Single
        } else {
            ExcitationKind::Double
        }
    }

    pub fn from(&self) -> &[usize] {
        &self.from
    }

    pub fn to(&self) -> &[usize] {
        &self.to
    }

    pub fn from_mask(&self) -> u64 {
        self.from.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn to_mask(&self) -> u64 {
        self.to.iter().fold(0, |m, &i| m | 1 << i)
    }

    /// Ladder operators of the excitation operator `T`, leftmost first.
    pub fn ladder_ops(&self) -> Vec<(Ladder, usize)> {
        let creates = self.to.iter().rev().map(|&p| (Ladder::Create, p));
        let annihilates = self.from.iter().rev().map(|&r| (Ladder::Annihilate, r));
        creates.chain(annihilates).collect()
    }

    /// `T|b⟩ = sign·|b'⟩`, or `None` when `T` annihilates `b`.
    pub fn apply_to_basis(&self, b: u64) -> Option<(f64, u64)> {
        if b & self.from_mask() != self.from_mask() || b & self.to_mask() != 0 {
            return None;
        }
        // rightmost operator acts first: annihilations in ascending order,
        // then creations in ascending order
        let mut state = b;
        let mut odd = false;
        for &mode in self.from.iter().chain(&self.to) {
            let bit = 1u64 << mode;
            odd ^= (state & (bit - 1)).count_ones() % 2 == 1;
            state ^= bit;
        }
        Some((if odd { -1.0 } else { 1.0 }, state))
    }

    /// Jordan–Wigner image of the anti-Hermitian generator `κ = T − T†`.
    pub fn generator(&self, n_qubits: usize) -> Result<PauliSum> {
        let t = fermion_product(&self.ladder_ops(), n_qubits)?;
        let mut k = t.adjoint();
        k.scale(Complex64::new(-1.0, 0.0));
        k += &t;
        k.simplify(crate::hamiltonian::PRUNE_TOL);
        Ok(k)
    }
}

impl fmt::Display for Excitation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}->{:?}", self.from, self.to)
    }
}

/// Ordered UCCSD excitations: doubles, then singles, each sorted by (to, from).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcitationList {
    excitations: Vec<Excitation>,
}

impl ExcitationList {
    pub fn new(excitations: Vec<Excitation>) -> Self {
        ExcitationList { excitations }
    }

    pub fn n_params(&self) -> usize {
        self.excitations.len()
    }

    pub fn len(&self) -> usize {
        self.excitations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.excitations.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Excitation> {
        self.excitations.iter()
    }

    pub fn as_slice(&self) -> &[Excitation] {
        &self.excitations
    }

    pub fn n_singles(&self) -> usize {
        self.iter()
            .filter(|e| e.kind() == ExcitationKind::Single)
            .count()
    }

    pub fn n_doubles(&self) -> usize {
        self.len() - self.n_singles()
    }
}

impl<'a> IntoIterator for &'a ExcitationList {
    type Item = &'a Excitation;
    type IntoIter = std::slice::Iter<'a, Excitation>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

fn check_counts(n_electrons: usize, n_spin_orbitals: usize) -> Result<()> {
    if !n_spin_orbitals.is_multiple_of(2) {
        return Err(Error::invalid("number of spin orbitals must be even"));
    }
    if n_spin_orbitals > MAX_QUBITS {
        return Err(Error::invalid(format!("at most {MAX_QUBITS} spin orbitals")));
    }
    if n_electrons == 0 || n_electrons >= n_spin_orbitals {
        return Err(Error::invalid(format!(
            "need 0 < electrons ({n_electrons}) < spin orbitals ({n_spin_orbitals})"
        )));
    }
    Ok(())
}

/// Lowest `n_electrons` spin orbitals occupied.
pub fn hf_determinant(n_electrons: usize, n_spin_orbitals: usize) -> Result<Determinant> {
    check_counts(n_electrons, n_spin_orbitals)?;
    Ok(Determinant::new((1u64 << n_electrons) - 1, n_spin_orbitals))
}

/// All Sz-conserving singles and doubles out of the Hartree–Fock determinant.
pub fn enumerate_excitations(n_electrons: usize, n_spin_orbitals: usize) -> Result<ExcitationList> {
    check_counts(n_electrons, n_spin_orbitals)?;
    let occ: Vec<usize> = (0..n_electrons).collect();
    let virt: Vec<usize> = (n_electrons..n_spin_orbitals).collect();

    let mut singles = Vec::new();
    for &r in &occ {
        for &p in &virt {
            if spin(p) == spin(r) {
                singles.push(Excitation::single(r, p)?);
            }
        }
    }
    let mut doubles = Vec::new();
    for (i, &s) in occ.iter().enumerate() {
        for &r in &occ[i + 1..] {
            for (j, &q) in virt.iter().enumerate() {
                for &p in &virt[j + 1..] {
                    if spin(s) + spin(r) == spin(q) + spin(p) {
                        doubles.push(Excitation::double([s, r], [q, p])?);
                    }
                }
            }
        }
    }
    let key = |e: &Excitation| (e.to.clone(), e.from.clone());
    doubles.sort_by_key(key);
    singles.sort_by_key(key);
    doubles.extend(singles);
    Ok(ExcitationList::new(doubles))
}
