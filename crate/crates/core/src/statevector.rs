//! Dense statevector engine.
//!
//! Amplitude index `b` is the computational basis state whose bit `j` is the
//! occupation of qubit (spin orbital) `j`. Excitation exponentials use the
//! closed form `exp(θκ) = I + sin θ κ + (1 − cos θ) κ²`, which on each pair
//! of coupled basis states is a plane rotation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::excitation::{Excitation, ExcitationList};
use crate::hamiltonian::QubitHamiltonian;
use crate::par;
use crate::sector::{SectorBasis, SectorOperator, SparseSectorMatrix, MAX_SECTOR_QUBITS};

/// Occupation bitmask of a Slater determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Determinant {
    occupation: u64,
    n_qubits: usize,
}

impl Determinant {
    pub fn new(occupation: u64, n_qubits: usize) -> Self {
        assert!(n_qubits <= 64);
        assert!(
            n_qubits == 64 || occupation >> n_qubits == 0,
            "occupation {occupation:#b} does not fit in {n_qubits} qubits"
        );
        Determinant {
            occupation,
            n_qubits,
        }
    }

    pub fn occupation(&self) -> u64 {
        self.occupation
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_electrons(&self) -> usize {
        self.occupation.count_ones() as usize
    }

    /// Number of electrons moved relative to `other` (same particle number).
    pub fn excitation_rank(&self, other: &Determinant) -> usize {
        (self.occupation ^ other.occupation).count_ones() as usize / 2
    }
}

impl fmt::Display for Determinant {
    /// Qubit 0 first, e.g. `1100` for two electrons in four spin orbitals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n_qubits {
            f.write_str(if self.occupation >> q & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Determinant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s.len() > 64 {
            return Err(Error::invalid(format!("bad determinant bitstring {s:?}")));
        }
        let mut occ = 0u64;
        for (q, ch) in s.chars().enumerate() {
            match ch {
                '1' => occ |= 1 << q,
                '0' => {}
                _ => return Err(Error::invalid(format!("bad determinant bitstring {s:?}"))),
            }
        }
        Ok(Determinant::new(occ, s.len()))
    }
}

/// Ordered determinants with real coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSet {
    dets: Vec<Determinant>,
    coeffs: Vec<f64>,
}

impl ReferenceSet {
    pub fn new(dets: Vec<Determinant>, coeffs: Vec<f64>) -> Result<Self> {
        if dets.is_empty() {
            return Err(Error::invalid("reference set is empty"));
        }
        if dets.len() != coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: dets.len(),
                got: coeffs.len(),
            });
        }
        let (nq, ne) = (dets[0].n_qubits(), dets[0].n_electrons());
        for d in &dets {
            if d.n_qubits() != nq || d.n_electrons() != ne {
                return Err(Error::invalid(format!(
                    "determinant {d} is outside the {ne}-electron, {nq}-qubit sector"
                )));
            }
        }
        let mut sorted = dets.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate determinants in reference set"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("reference coefficients"));
        }
        let r = ReferenceSet { dets, coeffs };
        if r.norm() == 0.0 {
            return Err(Error::invalid("reference coefficients have zero norm"));
        }
        Ok(r)
    }

    pub fn single(det: Determinant) -> Self {
        ReferenceSet {
            dets: vec![det],
            coeffs: vec![1.0],
        }
    }

    pub fn len(&self) -> usize {
        self.dets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dets.is_empty()
    }

    pub fn dets(&self) -> &[Determinant] {
        &self.dets
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn n_qubits(&self) -> usize {
        self.dets[0].n_qubits()
    }

    pub fn n_electrons(&self) -> usize {
        self.dets[0].n_electrons()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn contains(&self, det: &Determinant) -> bool {
        self.dets.contains(det)
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::invalid("cannot normalise reference coefficients"));
        }
        for c in &mut self.coeffs {
            *c /= n;
        }
        Ok(())
    }

    /// Replaces the coefficients in place (same length).
    pub fn set_coeffs(&mut self, coeffs: &[f64]) -> Result<()> {
        if coeffs.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coeffs.len(),
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("reference coefficients"));
        }
        self.coeffs.copy_from_slice(coeffs);
        Ok(())
    }

    /// Appends a determinant from the same sector.
    pub fn push(&mut self, det: Determinant, coeff: f64) -> Result<()> {
        if det.n_qubits() != self.n_qubits() || det.n_electrons() != self.n_electrons() {
            return Err(Error::invalid(format!("determinant {det} is in the wrong sector")));
        }
        if self.contains(&det) {
            return Err(Error::invalid(format!("determinant {det} already present")));
        }
        self.dets.push(det);
        self.coeffs.push(coeff);
        Ok(())
    }

    /// Keeps entries whose flag is set, preserving order.
    pub fn retain_mask(&mut self, keep: &[bool]) -> Result<()> {
        if keep.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: keep.len(),
            });
        }
        if !keep.iter().any(|&k| k) {
            return Err(Error::invalid("cannot drop every determinant"));
        }
        let mut i = 0;
        self.dets.retain(|_| {
            i += 1;
            keep[i - 1]
        });
        let mut i = 0;
        self.coeffs.retain(|_| {
            i += 1;
            keep[i - 1]
        });
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits > MAX_SECTOR_QUBITS {
            return Err(Error::invalid(format!(
                "{n_qubits} qubits exceeds the {MAX_SECTOR_QUBITS}-qubit statevector limit"
            )));
        }
        Ok(StateVector {
            n_qubits,
            amps: vec![Complex64::default(); 1 << n_qubits],
        })
    }

    pub fn basis(det: Determinant) -> Result<Self> {
        let mut s = Self::zero(det.n_qubits())?;
        s.amps[det.occupation() as usize] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n_qubits > MAX_SECTOR_QUBITS || amps.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits.min(MAX_SECTOR_QUBITS),
                got: amps.len(),
            });
        }
        Ok(StateVector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn amplitude(&self, det: &Determinant) -> Complex64 {
        self.amps[det.occupation() as usize]
    }

    pub fn norm_sqr(&self) -> f64 {
        let amps = &self.amps;
        par::chunked_sum(amps.len(), 0.0, |r| amps[r].iter().map(|a| a.norm_sqr()).sum())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        let (a, b) = (&self.amps, &other.amps);
        par::chunked_sum(a.len(), Complex64::default(), |r| {
            a[r.clone()].iter().zip(&b[r]).map(|(x, y)| x.conj() * y).sum()
        })
    }

    /// Total probability outside the `n_electrons` sector.
    pub fn leakage(&self, n_electrons: usize) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(b, _)| b.count_ones() as usize != n_electrons)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

/// Loads `Σ c_i |D_i⟩` (coefficients written as given).
pub fn prepare_reference(reference: &ReferenceSet, n_qubits: usize) -> Result<StateVector> {
    if reference.n_qubits() != n_qubits {
        return Err(Error::DimensionMismatch {
            expected: n_qubits,
            got: reference.n_qubits(),
        });
    }
    let mut s = StateVector::zero(n_qubits)?;
    for (d, &c) in reference.dets().iter().zip(reference.coeffs()) {
        s.amps[d.occupation() as usize] = Complex64::new(c, 0.0);
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy)]
struct Coupling {
    lo: u32,
    hi: u32,
    sign: f64,
}

/// An excitation exponential compiled to its list of coupled basis pairs.
///
/// `lo` has the source orbitals filled and targets empty; `κ|lo⟩ = sign·|hi⟩`
/// and `κ|hi⟩ = −sign·|lo⟩`.
#[derive(Debug, Clone)]
pub struct ExcitationGate {
    n_qubits: usize,
    pairs: Vec<Coupling>,
}

impl ExcitationGate {
    /// Compiles over the full register, or only the `n_electrons` sector.
    pub fn compile(exc: &Excitation, n_qubits: usize, n_electrons: Option<usize>) -> Result<Self> {
        if n_qubits > MAX_SECTOR_QUBITS {
            return Err(Error::invalid("register too large"));
        }
        let full = (1u64 << n_qubits) - 1;
        let (fm, tm) = (exc.from_mask(), exc.to_mask());
        if (fm | tm) & !full != 0 {
            return Err(Error::OutOfBounds {
                what: "qubits",
                index: 63 - (fm | tm).leading_zeros() as usize,
                len: n_qubits,
            });
        }
        let free = full & !(fm | tm);
        let want = n_electrons.map(|k| k.checked_sub(exc.from().len()));
        let mut pairs = Vec::new();
        let mut sub = free;
        loop {
            let keep = match want {
                None => true,
                Some(None) => false,
                Some(Some(k)) => sub.count_ones() as usize == k,
            };
            if keep {
                let lo = sub | fm;
                let (sign, hi) = exc
                    .apply_to_basis(lo)
                    .expect("source occupied and target empty by construction");
                pairs.push(Coupling {
                    lo: lo as u32,
                    hi: hi as u32,
                    sign,
                });
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        pairs.sort_by_key(|c| c.lo);
        Ok(ExcitationGate { n_qubits, pairs })
    }

    pub fn n_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// `amps ← exp(θκ) amps`.
    pub fn apply(&self, amps: &mut [Complex64], angle: f64) {
        if angle == 0.0 {
            return;
        }
        let (s, c) = angle.sin_cos();
        for p in &self.pairs {
            let (lo, hi) = (p.lo as usize, p.hi as usize);
            let (a, b) = (amps[lo], amps[hi]);
            amps[lo] = a * c - b * (p.sign * s);
            amps[hi] = a * (p.sign * s) + b * c;
        }
    }

    /// `⟨bra|κ|ket⟩`.
    pub fn kappa_matrix_element(&self, bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::default();
        for p in &self.pairs {
            let (lo, hi) = (p.lo as usize, p.hi as usize);
            acc += (bra[hi].conj() * ket[lo] - bra[lo].conj() * ket[hi]) * p.sign;
        }
        acc
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }
}

/// In-place `state ← exp(θκ) state` for one excitation.
pub fn apply_excitation_exponential(state: &mut StateVector, exc: &Excitation, angle: f64) -> Result<()> {
    let gate = ExcitationGate::compile(exc, state.n_qubits, None)?;
    gate.apply(&mut state.amps, angle);
    Ok(())
}

/// One Trotter layer of UCCSD: excitations applied in list order.
pub fn apply_uccsd(state: &mut StateVector, params: &[f64], excs: &ExcitationList) -> Result<()> {
    if params.len() != excs.len() {
        return Err(Error::DimensionMismatch {
            expected: excs.len(),
            got: params.len(),
        });
    }
    for (exc, &theta) in excs.iter().zip(params) {
        apply_excitation_exponential(state, exc, theta)?;
    }
    Ok(())
}

/// `Σ_t c_t ⟨ψ|P_t|ψ⟩`.
pub fn expectation(state: &StateVector, h: &QubitHamiltonian) -> Result<f64> {
    if state.n_qubits != h.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: h.n_qubits(),
            got: state.n_qubits,
        });
    }
    let amps = &state.amps;
    let total = par::chunked_sum(amps.len(), Complex64::default(), |range| {
        let mut acc = Complex64::default();
        for &(c, p) in h.terms() {
            let mut t = Complex64::default();
            for b in range.clone() {
                let (ph, img) = p.apply_to_basis(b as u64);
                t += amps[img as usize].conj() * ph * amps[b];
            }
            acc += t * c;
        }
        acc
    });
    Ok(total.re)
}

/// Energy and both gradients at one point of the (c, θ) landscape.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// Rayleigh quotient `⟨ψ|H|ψ⟩ / cᵀc`.
    pub energy: f64,
    pub grad_theta: Vec<f64>,
    pub grad_coeffs: Vec<f64>,
    /// Normalised trial state `U(θ)|ψ_init⟩ / ‖c‖`.
    pub state: StateVector,
}

/// Compiled trial-state evaluator for one Hamiltonian, ansatz and particle sector.
///
/// The Hamiltonian is stored as a sparse matrix on the sector; since every
/// gate conserves particle number this is exact for any reference in it.
#[derive(Debug, Clone)]
pub struct Evaluator {
    n_qubits: usize,
    n_electrons: usize,
    basis: SectorBasis,
    gates: Vec<ExcitationGate>,
    hamiltonian: SparseSectorMatrix,
}

impl Evaluator {
    pub fn new(h: &QubitHamiltonian, excs: &ExcitationList, n_electrons: usize) -> Result<Self> {
        let n_qubits = h.n_qubits();
        let basis = SectorBasis::particle_number(n_qubits, n_electrons)?;
        let gates = excs
            .iter()
            .map(|e| ExcitationGate::compile(e, n_qubits, Some(n_electrons)))
            .collect::<Result<_>>()?;
        let hamiltonian = SparseSectorMatrix::new(h, &basis)?;
        Ok(Evaluator {
            n_qubits,
            n_electrons,
            basis,
            gates,
            hamiltonian,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.gates.len()
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    fn check(&self, reference: &ReferenceSet, theta: &[f64]) -> Result<()> {
        if theta.len() != self.gates.len() {
            return Err(Error::DimensionMismatch {
                expected: self.gates.len(),
                got: theta.len(),
            });
        }
        if reference.n_qubits() != self.n_qubits || reference.n_electrons() != self.n_electrons {
            return Err(Error::invalid("reference is outside the evaluator's sector"));
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite("ansatz parameters"));
        }
        Ok(())
    }

    /// `U(θ) Σ c_i|D_i⟩` with the raw (unnormalised) coefficients.
    fn forward(&self, reference: &ReferenceSet, theta: &[f64]) -> Result<StateVector> {
        let mut psi = prepare_reference(reference, self.n_qubits)?;
        for (gate, &t) in self.gates.iter().zip(theta) {
            gate.apply(&mut psi.amps, t);
        }
        Ok(psi)
    }

    fn apply_h(&self, psi: &StateVector) -> StateVector {
        let dim = self.basis.len();
        let mut x = vec![Complex64::default(); dim];
        let mut y = vec![Complex64::default(); dim];
        self.basis.gather(&psi.amps, &mut x);
        self.hamiltonian.apply(&x, &mut y);
        let mut out = StateVector {
            n_qubits: self.n_qubits,
            amps: vec![Complex64::default(); psi.amps.len()],
        };
        self.basis.scatter(&y, &mut out.amps);
        out
    }

    /// Normalised trial state.
    pub fn trial_state(&self, reference: &ReferenceSet, theta: &[f64]) -> Result<StateVector> {
        self.check(reference, theta)?;
        let mut psi = self.forward(reference, theta)?;
        let n = reference.norm();
        psi.amps.iter_mut().for_each(|a| *a /= n);
        Ok(psi)
    }

    pub fn energy(&self, reference: &ReferenceSet, theta: &[f64]) -> Result<f64> {
        self.check(reference, theta)?;
        let psi = self.forward(reference, theta)?;
        let lam = self.apply_h(&psi);
        Ok(psi.inner(&lam).re / reference.norm().powi(2))
    }

    /// Energy plus adjoint gradients in θ and c.
    ///
    /// One forward sweep, one Hamiltonian application and one backward sweep
    /// that un-applies each gate from both the state and `H|ψ⟩`.
    pub fn evaluate(&self, reference: &ReferenceSet, theta: &[f64]) -> Result<Evaluation> {
        self.check(reference, theta)?;
        let norm2 = reference.norm().powi(2);
        let mut psi = self.forward(reference, theta)?;
        let mut lam = self.apply_h(&psi);
        let energy = psi.inner(&lam).re / norm2;
        if !energy.is_finite() {
            return Err(Error::NonFinite("energy"));
        }
        let mut state = psi.clone();
        let inv = 1.0 / norm2.sqrt();
        state.amps.iter_mut().for_each(|a| *a *= inv);

        let mut grad_theta = vec![0.0; self.gates.len()];
        for (k, gate) in self.gates.iter().enumerate().rev() {
            grad_theta[k] = 2.0 * gate.kappa_matrix_element(&lam.amps, &psi.amps).re / norm2;
            gate.apply(&mut psi.amps, -theta[k]);
            gate.apply(&mut lam.amps, -theta[k]);
        }
        // lam = U† H U |ψ_init⟩
        let grad_coeffs = reference
            .dets()
            .iter()
            .zip(reference.coeffs())
            .map(|(d, &c)| 2.0 * (lam.amplitude(d).re - energy * c) / norm2)
            .collect();
        Ok(Evaluation {
            energy,
            grad_theta,
            grad_coeffs,
            state,
        })
    }
}

/// `∂E/∂θ` of the trial-state energy.
pub fn grad_theta(
    reference: &ReferenceSet,
    theta: &[f64],
    excs: &ExcitationList,
    h: &QubitHamiltonian,
) -> Result<Vec<f64>> {
    let ev = Evaluator::new(h, excs, reference.n_electrons())?;
    Ok(ev.evaluate(reference, theta)?.grad_theta)
}

/// `∂E/∂c` of the Rayleigh quotient `cᵀAc / cᵀc`.
pub fn grad_coeffs(
    reference: &ReferenceSet,
    theta: &[f64],
    excs: &ExcitationList,
    h: &QubitHamiltonian,
) -> Result<Vec<f64>> {
    let ev = Evaluator::new(h, excs, reference.n_electrons())?;
    Ok(ev.evaluate(reference, theta)?.grad_coeffs)
}

/// Multinomial shot counts from `|amplitude|²`, reproducible for a seed.
pub fn sample_counts(state: &StateVector, n_shots: u64, seed: u64) -> Result<BTreeMap<Determinant, u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_counts_with(state, n_shots, &mut rng)
}

/// As [`sample_counts`] but drawing from a caller-owned RNG stream.
///
/// Draws one conditional binomial per nonzero basis state in ascending order,
/// so the cost scales with the support rather than the shot count.
pub fn sample_counts_with<R: Rng + ?Sized>(
    state: &StateVector,
    n_shots: u64,
    rng: &mut R,
) -> Result<BTreeMap<Determinant, u64>> {
    if n_shots == 0 {
        return Err(Error::invalid("n_shots must be at least 1"));
    }
    let support: Vec<(usize, f64)> = state
        .amps
        .iter()
        .enumerate()
        .map(|(b, a)| (b, a.norm_sqr()))
        .filter(|&(_, p)| p > 0.0)
        .collect();
    if support.is_empty() {
        return Err(Error::invalid("cannot sample the zero vector"));
    }
    let mut remaining_mass: f64 = support.iter().map(|&(_, p)| p).sum();
    let mut remaining = n_shots;
    let mut counts = BTreeMap::new();
    let last = support.len() - 1;
    for (i, &(b, p)) in support.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let k = if i == last {
            remaining
        } else {
            let q = (p / remaining_mass).clamp(0.0, 1.0);
            Binomial::new(remaining, q)
                .map_err(|e| Error::invalid(format!("binomial draw: {e}")))?
                .sample(rng)
        };
        remaining_mass -= p;
        remaining -= k;
        if k > 0 {
            counts.insert(Determinant::new(b as u64, state.n_qubits), k);
        }
    }
    Ok(counts)
}

/// Exact `|amplitude|²` for every basis state at or above `floor`.
pub fn exact_probabilities(state: &StateVector, floor: f64) -> BTreeMap<Determinant, f64> {
    state
        .amps
        .iter()
        .enumerate()
        .map(|(b, a)| (b, a.norm_sqr()))
        .filter(|&(_, p)| p >= floor)
        .map(|(b, p)| (Determinant::new(b as u64, state.n_qubits), p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::excitation::{enumerate_excitations, hf_determinant};
    use crate::pauli::PauliString;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn det(s: &str) -> Determinant {
        s.parse().unwrap()
    }

    #[test]
    fn determinant_text_round_trip() {
        let d = det("1100");
        assert_eq!(d.occupation(), 0b0011);
        assert_eq!(d.to_string(), "1100");
        assert_eq!(d.excitation_rank(&det("0011")), 2);
        assert!("12".parse::<Determinant>().is_err());
    }

    #[test]
    fn reference_validation() {
        assert!(ReferenceSet::new(vec![], vec![]).is_err());
        assert!(ReferenceSet::new(vec![det("1100"), det("1100")], vec![1.0, 1.0]).is_err());
        assert!(ReferenceSet::new(vec![det("1100"), det("1000")], vec![1.0, 1.0]).is_err());
        assert!(ReferenceSet::new(vec![det("1100")], vec![0.0]).is_err());
        assert!(ReferenceSet::new(vec![det("1100")], vec![1.0, 2.0]).is_err());
        let mut r = ReferenceSet::new(vec![det("1100"), det("0011")], vec![3.0, 4.0]).unwrap();
        r.normalize().unwrap();
        assert!((r.norm() - 1.0).abs() < 1e-15);
        assert!(r.push(det("0011"), 0.1).is_err());
        assert!(r.push(det("1110"), 0.1).is_err());
        r.push(det("1010"), 0.1).unwrap();
        r.retain_mask(&[true, false, true]).unwrap();
        assert_eq!(r.dets(), &[det("1100"), det("1010")]);
        assert!(r.retain_mask(&[false, false]).is_err());
    }

    #[test]
    fn reference_preparation() {
        let hf = hf_determinant(2, 4).unwrap();
        let s = prepare_reference(&ReferenceSet::single(hf), 4).unwrap();
        assert_eq!(s.amplitudes()[0b0011], Complex64::new(1.0, 0.0));
        assert_eq!(s.norm_sqr(), 1.0);

        let r = ReferenceSet::new(vec![det("1100"), det("0011")], vec![FRAC_1_SQRT_2, -FRAC_1_SQRT_2])
            .unwrap();
        let s = prepare_reference(&r, 4).unwrap();
        assert_eq!(s.amplitudes()[0b0011].re, FRAC_1_SQRT_2);
        assert_eq!(s.amplitudes()[0b1100].re, -FRAC_1_SQRT_2);
        assert!((s.norm() - 1.0).abs() < 1e-15);

        let beh2 = hf_determinant(6, 14).unwrap();
        let s = prepare_reference(&ReferenceSet::single(beh2), 14).unwrap();
        assert_eq!(s.amplitude(&det("11111100000000")).re, 1.0);
        assert_eq!(s.norm_sqr(), 1.0);
        assert!(prepare_reference(&ReferenceSet::single(beh2), 12).is_err());
    }

    #[test]
    fn zero_angle_is_identity_and_quarter_turn_moves_electron() {
        let hf = hf_determinant(2, 4).unwrap();
        let exc = Excitation::single(0, 2).unwrap();
        let mut s = StateVector::basis(hf).unwrap();
        apply_excitation_exponential(&mut s, &exc, 0.0).unwrap();
        assert_eq!(s, StateVector::basis(hf).unwrap());
        apply_excitation_exponential(&mut s, &exc, FRAC_PI_2).unwrap();
        // c†_2 c_0 |1100> picks up the parity of occupied qubit 1
        let amp = s.amplitude(&det("0110"));
        assert!((amp.re + 1.0).abs() < 1e-15, "{amp}");
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uccsd_length_mismatch() {
        let excs = enumerate_excitations(2, 4).unwrap();
        let mut s = StateVector::basis(hf_determinant(2, 4).unwrap()).unwrap();
        assert!(apply_uccsd(&mut s, &[0.1], &excs).is_err());
        apply_uccsd(&mut s, &[0.0; 3], &excs).unwrap();
        assert_eq!(s.amplitudes()[0b0011].re, 1.0);
    }

    #[test]
    fn expectation_basics() {
        let z = QubitHamiltonian::new(2, [(1.0, PauliString::from_letters("ZI").unwrap())]).unwrap();
        let x = QubitHamiltonian::new(2, [(1.0, PauliString::from_letters("XI").unwrap())]).unwrap();
        let s = StateVector::basis(det("00")).unwrap();
        assert_eq!(expectation(&s, &z).unwrap(), 1.0);
        assert_eq!(expectation(&s, &x).unwrap(), 0.0);
        let s3 = StateVector::basis(det("000")).unwrap();
        assert!(expectation(&s3, &z).is_err());
    }

    #[test]
    fn sampling_a_basis_state() {
        let s = StateVector::basis(det("1100")).unwrap();
        let counts = sample_counts(&s, 1234, 7).unwrap();
        assert_eq!(counts.len(), 1);
        assert_eq!(counts[&det("1100")], 1234);
        assert!(sample_counts(&s, 0, 7).is_err());
    }

    #[test]
    fn sampling_two_way_superposition() {
        let r = ReferenceSet::new(vec![det("1100"), det("0011")], vec![1.0, 1.0]).unwrap();
        let mut r = r;
        r.normalize().unwrap();
        let s = prepare_reference(&r, 4).unwrap();
        let n = 100_000;
        let counts = sample_counts(&s, n, 3).unwrap();
        for d in ["1100", "0011"] {
            let f = counts[&det(d)] as f64 / n as f64;
            assert!((f - 0.5).abs() < 0.01, "{d}: {f}");
        }
        assert_eq!(counts, sample_counts(&s, n, 3).unwrap());
    }

    #[test]
    fn exact_probability_floor() {
        let s = StateVector::basis(det("1100")).unwrap();
        let p = exact_probabilities(&s, 1e-12);
        assert_eq!(p.len(), 1);
        assert_eq!(p[&det("1100")], 1.0);
        let uniform = StateVector::from_amplitudes(2, vec![Complex64::new(0.5, 0.0); 4]).unwrap();
        let p = exact_probabilities(&uniform, 0.0);
        assert_eq!(p.len(), 4);
        assert!(p.values().all(|&v| v == 0.25));
    }

    #[test]
    fn single_determinant_coefficient_gradient_vanishes() {
        let h = QubitHamiltonian::new(
            4,
            [
                (0.3, PauliString::from_letters("XXYY").unwrap()),
                (-0.5, PauliString::from_letters("ZIII").unwrap()),
            ],
        )
        .unwrap();
        let excs = enumerate_excitations(2, 4).unwrap();
        let r = ReferenceSet::single(hf_determinant(2, 4).unwrap());
        let g = grad_coeffs(&r, &[0.2, -0.1, 0.3], &excs, &h).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g[0].abs() < 1e-15);
    }
}
