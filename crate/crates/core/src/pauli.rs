//! Pauli strings as (x, z) bitmask pairs and complex-weighted sums of them.
//!
//! Letter encoding per qubit: I = (0, 0), X = (1, 0), Y = (1, 1), Z = (0, 1).
//! A string with masks (x, z) denotes the operator `i^|x&z| · X^x · Z^z`,
//! which makes every Y contribute exactly `i·X·Z`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{AddAssign, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register a bitmask string can describe.
pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Power of `i`, stored mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);

    pub fn from_power(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
}

fn register_mask(n_qubits: usize) -> u64 {
    if n_qubits == 64 {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    }
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        assert!(n_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        PauliString { n_qubits, x: 0, z: 0 }
    }

    pub fn from_masks(n_qubits: usize, x: u64, z: u64) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::invalid(format!("at most {MAX_QUBITS} qubits")));
        }
        let outside = !register_mask(n_qubits);
        if (x | z) & outside != 0 {
            return Err(Error::invalid("Pauli mask touches qubits outside the register"));
        }
        Ok(PauliString { n_qubits, x, z })
    }

    /// A single non-identity letter on `qubit`.
    pub fn single(n_qubits: usize, qubit: usize, p: Pauli) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::OutOfBounds {
                what: "qubits",
                index: qubit,
                len: n_qubits,
            });
        }
        let (xb, zb) = p.bits();
        Self::from_masks(n_qubits, (xb as u64) << qubit, (zb as u64) << qubit)
    }

    /// Parses a letter string, qubit 0 first (`"XIZY"`).
    pub fn from_letters(s: &str) -> Result<Self> {
        let mut out = PauliString::identity(s.chars().count());
        for (q, ch) in s.chars().enumerate() {
            let p = match ch.to_ascii_uppercase() {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(Error::invalid(format!("not a Pauli letter: {other:?}"))),
            };
            let (xb, zb) = p.bits();
            out.x |= (xb as u64) << q;
            out.z |= (zb as u64) << q;
        }
        Ok(out)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn letter(&self, qubit: usize) -> Pauli {
        Pauli::from_bits((self.x >> qubit) & 1 == 1, (self.z >> qubit) & 1 == 1)
    }

    pub fn letters(&self) -> String {
        (0..self.n_qubits).map(|q| self.letter(q).letter()).collect()
    }

    /// Number of Y letters, i.e. the power of `i` in the X·Z factorisation.
    fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Product `self · other = phase · result`.
    pub fn mul_with_phase(&self, other: &PauliString) -> (Phase, PauliString) {
        debug_assert_eq!(self.n_qubits, other.n_qubits);
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let result = PauliString { n_qubits: self.n_qubits, x, z };
        // i^{a1+a2} (-1)^{|z1&x2|} X^x Z^z = i^{a1+a2+2|z1&x2|-a3} P3
        let power = self.y_count() + other.y_count() + 2 * (self.z & other.x).count_ones()
            + 4 * 64
            - result.y_count();
        (Phase::from_power(power), result)
    }

    /// Image of basis state `b`: `P|b⟩ = phase · |b ⊕ x⟩`.
    #[inline]
    pub fn apply_to_basis(&self, b: u64) -> (Complex64, u64) {
        let sign_flips = (self.z & b).count_ones();
        (Phase::from_power(self.y_count() + 2 * sign_flips).to_complex(), b ^ self.x)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.letters())
    }
}

/// Sum of Pauli strings with complex coefficients, kept sorted by mask.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<(u64, u64), Complex64>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        PauliSum {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(coeff: Complex64, p: PauliString) -> Self {
        let mut s = Self::zero(p.n_qubits);
        s.add_term(coeff, p);
        s
    }

    pub fn identity(n_qubits: usize, coeff: f64) -> Self {
        Self::from_term(Complex64::new(coeff, 0.0), PauliString::identity(n_qubits))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, coeff: Complex64, p: PauliString) {
        assert_eq!(p.n_qubits, self.n_qubits, "register size mismatch");
        *self.terms.entry((p.x, p.z)).or_default() += coeff;
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms.get(&(p.x, p.z)).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Complex64, PauliString)> + '_ {
        let n = self.n_qubits;
        self.terms
            .iter()
            .map(move |(&(x, z), &c)| (c, PauliString { n_qubits: n, x, z }))
    }

    pub fn scale(&mut self, factor: Complex64) {
        for c in self.terms.values_mut() {
            *c *= factor;
        }
    }

    /// Hermitian conjugate; Pauli strings are Hermitian so only the weights change.
    pub fn adjoint(&self) -> PauliSum {
        PauliSum {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|(&k, c)| (k, c.conj())).collect(),
        }
    }

    /// Drops every term with modulus at or below `tol`.
    pub fn simplify(&mut self, tol: f64) {
        self.terms.retain(|_, c| c.norm() > tol);
    }

    /// Dense row-major matrix in the computational basis (qubit j ↔ bit j).
    pub fn to_dense(&self) -> Vec<Complex64> {
        assert!(self.n_qubits <= 14, "dense matrices limited to 14 qubits");
        let dim = 1usize << self.n_qubits;
        let mut m = vec![Complex64::default(); dim * dim];
        for (c, p) in self.terms() {
            for col in 0..dim {
                let (ph, row) = p.apply_to_basis(col as u64);
                m[row as usize * dim + col] += c * ph;
            }
        }
        m
    }
}

impl Mul for &PauliSum {
    type Output = PauliSum;

    fn mul(self, rhs: &PauliSum) -> PauliSum {
        assert_eq!(self.n_qubits, rhs.n_qubits, "register size mismatch");
        let mut out = PauliSum::zero(self.n_qubits);
        for (ca, pa) in self.terms() {
            for (cb, pb) in rhs.terms() {
                let (ph, p) = pa.mul_with_phase(&pb);
                out.add_term(ca * cb * ph.to_complex(), p);
            }
        }
        out
    }
}

impl AddAssign<&PauliSum> for PauliSum {
    fn add_assign(&mut self, rhs: &PauliSum) {
        assert_eq!(self.n_qubits, rhs.n_qubits, "register size mismatch");
        for (&k, &c) in &rhs.terms {
            *self.terms.entry(k).or_default() += c;
        }
    }
}
