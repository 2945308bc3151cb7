//! Signed Pauli strings in symplectic form.
//!
//! A [`PauliString`] stores one x-bit and one z-bit per qubit plus a phase in
//! `{1, i, -1, -i}`. Letters map as I=(0,0), X=(1,0), Y=(1,1), Z=(0,1), and
//! the operator is `phase * P_0 ⊗ P_1 ⊗ … ⊗ P_{n-1}` with qubit 0 leftmost.

use num_complex::Complex64;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::bits::qubit_mask;
use crate::error::{Error, Result};
use crate::statevec::StateVector;

pub const MAX_PAULI_QUBITS: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// Power of `i`, taken mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    pub fn power(self) -> u32 {
        self.0 as u32
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    fn prefix(self) -> &'static str {
        match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: Phase,
}

impl PauliString {
    pub fn identity(n: usize) -> Result<Self> {
        check_len(n)?;
        Ok(Self { n, x: 0, z: 0, phase: Phase::ONE })
    }

    pub fn from_letters(phase: Phase, letters: &[Letter]) -> Result<Self> {
        let n = letters.len();
        check_len(n)?;
        let (mut x, mut z) = (0u64, 0u64);
        for (q, l) in letters.iter().enumerate() {
            let (lx, lz) = l.bits();
            let m = qubit_mask(n, q) as u64;
            if lx {
                x |= m;
            }
            if lz {
                z |= m;
            }
        }
        Ok(Self { n, x, z, phase })
    }

    /// Raw symplectic masks in basis-index bit order.
    pub fn from_masks(n: usize, x: u64, z: u64, phase: Phase) -> Result<Self> {
        check_len(n)?;
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if x & !full != 0 || z & !full != 0 {
            return Err(Error::DimensionMismatch { expected: n, found: 64 - (x | z).leading_zeros() as usize });
        }
        Ok(Self { n, x, z, phase })
    }

    /// One non-identity letter on qubit `q`.
    pub fn single(n: usize, q: usize, letter: Letter) -> Result<Self> {
        if q >= n {
            return Err(Error::QubitOutOfRange { qubit: q, n });
        }
        let mut letters = vec![Letter::I; n];
        letters[q] = letter;
        Self::from_letters(Phase::ONE, &letters)
    }

    /// Product of one `letter` on each listed qubit.
    pub fn on_qubits(n: usize, qubits: &[usize], letter: Letter) -> Result<Self> {
        let mut letters = vec![Letter::I; n];
        for &q in qubits {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
            letters[q] = letter;
        }
        Self::from_letters(Phase::ONE, &letters)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn letter(&self, q: usize) -> Letter {
        let m = qubit_mask(self.n, q) as u64;
        match (self.x & m != 0, self.z & m != 0) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn count(&self, letter: Letter) -> usize {
        (0..self.n).filter(|&q| self.letter(q) == letter).count()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Same letters, phase ignored.
    pub fn same_letters(&self, other: &PauliString) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    /// True iff the strings commute.
    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.symplectic_product(other) == 0)
    }

    /// 0 if the strings commute, 1 if they anticommute.
    pub(crate) fn symplectic_product(&self, other: &PauliString) -> u32 {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() & 1
    }

    /// Operator product `self · other`.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        self.check_same(other)?;
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let k = self.phase.power()
            + other.phase.power()
            + (self.x & self.z).count_ones()
            + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 4 * 64
            - (x & z).count_ones();
        Ok(PauliString { n: self.n, x, z, phase: Phase::from_power(k) })
    }

    /// `P|ψ⟩`
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.num_qubits() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: state.num_qubits() });
        }
        let base = Phase::from_power(self.phase.power() + (self.x & self.z).count_ones()).to_complex();
        let (x, z) = (self.x as usize, self.z as usize);
        let src = state.amplitudes();
        let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
        for (s, a) in src.iter().enumerate() {
            let sign = if (s & z).count_ones() & 1 == 1 { -1.0 } else { 1.0 };
            out[s ^ x] = a * base * sign;
        }
        Ok(StateVector::from_raw(self.n, out))
    }

    /// `⟨ψ|P|ψ⟩`
    pub fn expectation(&self, state: &StateVector) -> Result<Complex64> {
        if state.num_qubits() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: state.num_qubits() });
        }
        let base = Phase::from_power(self.phase.power() + (self.x & self.z).count_ones()).to_complex();
        let (x, z) = (self.x as usize, self.z as usize);
        let amps = state.amplitudes();
        let mut acc = Complex64::new(0.0, 0.0);
        for (s, a) in amps.iter().enumerate() {
            let term = amps[s ^ x].conj() * a;
            if (s & z).count_ones() & 1 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        Ok(acc * base)
    }

    /// Restriction to a contiguous block of qubits `[start, start + len)`.
    pub fn block(&self, start: usize, len: usize) -> Result<PauliString> {
        if start + len > self.n {
            return Err(Error::QubitOutOfRange { qubit: start + len - 1, n: self.n });
        }
        let letters: Vec<Letter> = (start..start + len).map(|q| self.letter(q)).collect();
        PauliString::from_letters(Phase::ONE, &letters)
    }

    fn check_same(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::TooFewQubits { n, min: 1 });
    }
    if n > MAX_PAULI_QUBITS {
        return Err(Error::UnsupportedSize { what: "Pauli string", n, max: MAX_PAULI_QUBITS });
    }
    Ok(())
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.phase.prefix())?;
        for l in self.letters() {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts an optional phase prefix (`+`, `-`, `i`, `+i`, `-i`) followed
    /// by letters from `IXYZ`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPauliString(s.to_owned());
        let (phase, rest) = if let Some(r) = s.strip_prefix("-i") {
            (Phase::MINUS_I, r)
        } else if let Some(r) = s.strip_prefix("+i") {
            (Phase::I, r)
        } else if let Some(r) = s.strip_prefix('i') {
            (Phase::I, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::ONE, r)
        } else {
            (Phase::ONE, s)
        };
        let letters = rest
            .chars()
            .map(|c| match c {
                'I' => Ok(Letter::I),
                'X' => Ok(Letter::X),
                'Y' => Ok(Letter::Y),
                'Z' => Ok(Letter::Z),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(bad());
        }
        PauliString::from_letters(phase, &letters)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    /// Dense 2^n matrix of a Pauli string, built letter by letter.
    fn dense(ps: &PauliString) -> Vec<Vec<Complex64>> {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let single = |l: Letter| match l {
            Letter::I => [[one, zero], [zero, one]],
            Letter::X => [[zero, one], [one, zero]],
            Letter::Y => [[zero, -i], [i, zero]],
            Letter::Z => [[one, zero], [zero, -one]],
        };
        let mut m = vec![vec![ps.phase().to_complex()]];
        for l in ps.letters() {
            let s = single(l);
            let d = m.len();
            let mut next = vec![vec![zero; 2 * d]; 2 * d];
            for r in 0..d {
                for c in 0..d {
                    for a in 0..2 {
                        for b in 0..2 {
                            next[2 * r + a][2 * c + b] = m[r][c] * s[a][b];
                        }
                    }
                }
            }
            m = next;
        }
        m
    }

    fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let d = a.len();
        (0..d)
            .map(|r| (0..d).map(|c| (0..d).map(|k| a[r][k] * b[k][c]).sum()).collect())
            .collect()
    }

    #[test]
    fn commutation_examples() {
        assert!(p("XX").commutes_with(&p("ZZ")).unwrap());
        assert!(!p("XI").commutes_with(&p("ZI")).unwrap());
        assert!(p("XYZ").commutes_with(&p("III")).unwrap());
        assert!(p("X").commutes_with(&p("XX")).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("-iYZI").to_string(), "-iYZI");
        assert_eq!(p("XZ").to_string(), "+XZ");
        assert_eq!(p("iZ").phase(), Phase::I);
        assert!("XA".parse::<PauliString>().is_err());
        assert!("-".parse::<PauliString>().is_err());
    }

    #[test]
    fn xz_is_minus_i_y() {
        assert_eq!(p("X").mul(&p("Z")).unwrap(), p("-iY"));
        assert_eq!(p("Z").mul(&p("X")).unwrap(), p("iY"));
        assert_eq!(p("Y").mul(&p("Y")).unwrap(), p("I"));
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
        (prop::collection::vec(0usize..4, n), 0u32..4).prop_map(move |(ls, ph)| {
            let letters: Vec<Letter> = ls.into_iter().map(|k| Letter::ALL[k]).collect();
            PauliString::from_letters(Phase::from_power(ph), &letters).unwrap()
        })
    }

    proptest! {
        #[test]
        fn product_matches_dense_matrices(a in arb_pauli(3), b in arb_pauli(3)) {
            let prod = a.mul(&b).unwrap();
            let expect = matmul(&dense(&a), &dense(&b));
            let got = dense(&prod);
            for r in 0..8 {
                for c in 0..8 {
                    prop_assert!((expect[r][c] - got[r][c]).norm() < 1e-12);
                }
            }
        }

        #[test]
        fn apply_matches_dense_matrix(a in arb_pauli(3), col in 0usize..8) {
            let s = StateVector::basis(3, col).unwrap();
            let out = a.apply(&s).unwrap();
            let m = dense(&a);
            for r in 0..8 {
                prop_assert!((out.amplitude(r) - m[r][col]).norm() < 1e-12);
            }
        }

        #[test]
        fn commutation_matches_products(a in arb_pauli(4), b in arb_pauli(4)) {
            let ab = a.mul(&b).unwrap();
            let ba = b.mul(&a).unwrap();
            prop_assert_eq!(a.commutes_with(&b).unwrap(), ab == ba);
        }
    }
}
