//! n-coupled states: equal superpositions over all n-bit strings of one parity.
//!
//! The even state `|ψ_n^+⟩` and odd state `|ψ_n^-⟩` are built three ways:
//! directly from the parity set, by a Clifford preparation circuit, and (for
//! the rest of the basis) by local Pauli words acting on `|ψ_n^+⟩`.

mod entanglement;

pub use entanglement::{
    bipartition_entropy, check_maximally_connected, check_maximally_connected_tol, is_fully_product,
    mps_amplitude, persistency, persistency_computational, q_information, q_information_of,
    schmidt_decompose, MeasurementBasis, SchmidtDecomposition, MAX_PERSISTENCY_QUBITS,
};

use num_complex::Complex64;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::bits::{self, pow2_half};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString, Phase};
use crate::statevec::{apply_circuit, apply_gate, GateOp, StateVector, MAX_STATE_QUBITS, ZERO};

/// Largest `n` for which the full `2^n`-state basis is materialized.
pub const MAX_BASIS_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn bit(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn of(index: usize) -> Self {
        if bits::parity(index) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn sign(self) -> char {
        match self {
            Parity::Even => '+',
            Parity::Odd => '-',
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" | "+" | "plus" => Ok(Parity::Even),
            "odd" | "-" | "minus" => Ok(Parity::Odd),
            _ => Err(Error::InvalidParameter(format!("unknown parity {s:?}"))),
        }
    }
}

/// All `n`-bit strings of one parity, as ascending basis indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParitySet {
    n: usize,
    parity: Parity,
    members: Vec<usize>,
}

impl ParitySet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        index < 1 << self.n && Parity::of(index) == self.parity
    }

    pub fn bit_strings(&self) -> Vec<String> {
        self.members.iter().map(|&s| bits::to_bit_string(self.n, s)).collect()
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::TooFewQubits { n, min: 1 });
    }
    if n > MAX_STATE_QUBITS {
        return Err(Error::UnsupportedSize { what: "n-coupled state", n, max: MAX_STATE_QUBITS });
    }
    Ok(())
}

pub fn parity_set(n: usize, parity: Parity) -> Result<ParitySet> {
    check_n(n)?;
    let members = (0..1usize << n).filter(|&s| Parity::of(s) == parity).collect();
    Ok(ParitySet { n, parity, members })
}

/// `|ψ_n^±⟩ = √2 / 2^{n/2} Σ_{s ∈ S} |s⟩`
pub fn ncoupled_state(n: usize, parity: Parity) -> Result<StateVector> {
    check_n(n)?;
    let a = Complex64::new(std::f64::consts::SQRT_2 / pow2_half(n), 0.0);
    let amps = (0..1usize << n)
        .map(|s| if Parity::of(s) == parity { a } else { ZERO })
        .collect();
    Ok(StateVector::from_raw(n, amps))
}

/// Clifford circuit taking `|0…0⟩` to `|ψ_n^±⟩`; the odd circuit flips qubit 0.
pub fn preparation_circuit(n: usize, parity: Parity) -> Result<Vec<GateOp>> {
    preparation_circuit_with_flip(n, parity, 0)
}

/// As [`preparation_circuit`], with the odd-parity `X` placed on `flip`.
///
/// The even part is `H` on qubits `1..n`, then `CNOT(k → k-1)` for
/// `k = 1, …, n-1` in that order: `2n - 2` gates. The odd circuit appends a
/// single `X`.
pub fn preparation_circuit_with_flip(n: usize, parity: Parity, flip: usize) -> Result<Vec<GateOp>> {
    check_n(n)?;
    if flip >= n {
        return Err(Error::QubitOutOfRange { qubit: flip, n });
    }
    let mut gates: Vec<GateOp> = (1..n).map(GateOp::h).collect();
    for k in 1..n {
        gates.push(GateOp::cnot(k, k - 1)?);
    }
    if parity == Parity::Odd {
        gates.push(GateOp::x(flip));
    }
    Ok(gates)
}

/// `U|s⟩` for every computational basis state `s`, in index order.
pub fn ncoupled_basis(n: usize) -> Result<Vec<StateVector>> {
    check_basis_n(n)?;
    let u = preparation_circuit(n, Parity::Even)?;
    (0..1usize << n)
        .map(|s| apply_circuit(&StateVector::basis(n, s)?, &u))
        .collect()
}

fn check_basis_n(n: usize) -> Result<()> {
    check_n(n)?;
    if n > MAX_BASIS_QUBITS {
        return Err(Error::UnsupportedSize { what: "full basis", n, max: MAX_BASIS_QUBITS });
    }
    Ok(())
}

/// A basis state written as a local Pauli word on `|ψ_n^+⟩`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisLabel {
    /// 1-based position in the basis; label `k` is `U|k-1⟩`.
    pub index: usize,
    /// Acts as the identity on the last qubit.
    pub pauli_word: PauliString,
    pub global_phase: SerComplex,
}

/// Complex scalar that serializes as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerComplex(pub Complex64);

impl Serialize for SerComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl BasisLabel {
    /// `global_phase · pauli_word |ψ_n^+⟩`
    pub fn state(&self) -> Result<StateVector> {
        let n = self.pauli_word.num_qubits();
        let psi = ncoupled_state(n, Parity::Even)?;
        Ok(self.pauli_word.apply(&psi)?.with_global_phase(self.global_phase.0))
    }

    /// Source computational basis state of the circuit construction.
    pub fn source_bits(&self) -> String {
        bits::to_bit_string(self.pauli_word.num_qubits(), self.index - 1)
    }
}

/// Pauli word `W` and phase with `U|s⟩ = phase · W|ψ_n^+⟩`.
///
/// `X` on input qubit 0 passes straight through `U`; `X` on input qubit
/// `k ≥ 1` becomes `Z_k Z_{k+1} … Z_{n-1}`. A `Z` left on the last qubit is
/// traded for `Z` on all the others since `Z^{⊗n}` fixes `|ψ_n^+⟩`.
pub fn basis_label(n: usize, s: usize) -> Result<BasisLabel> {
    check_n(n)?;
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    if s >= 1 << n {
        return Err(Error::DimensionMismatch { expected: 1 << n, found: s });
    }
    let b = |q: usize| bits::qubit_value(n, s, q) == 1;
    let mut z = vec![false; n];
    let mut acc = false;
    for (k, zk) in z.iter_mut().enumerate().skip(1) {
        acc ^= b(k);
        *zk = acc;
    }
    if z[n - 1] {
        z[n - 1] = false;
        z[..n - 1].iter_mut().for_each(|v| *v = !*v);
    }
    let zs: Vec<usize> = (0..n).filter(|&q| z[q]).collect();
    let zword = PauliString::on_qubits(n, &zs, Letter::Z)?;
    let word = if b(0) { PauliString::single(n, 0, Letter::X)?.mul(&zword)? } else { zword };
    Ok(BasisLabel { index: s + 1, pauli_word: word, global_phase: SerComplex(Phase::ONE.to_complex()) })
}

/// Every basis label, ordered like [`ncoupled_basis`].
pub fn local_pauli_basis(n: usize) -> Result<Vec<BasisLabel>> {
    check_basis_n(n)?;
    (0..1usize << n).map(|s| basis_label(n, s)).collect()
}

/// Whether `H^{⊗n}|GHZ_n⟩ = |ψ_n^+⟩` within 1e-12.
pub fn ghz_relation_check(n: usize) -> Result<bool> {
    check_n(n)?;
    let mut s = StateVector::ghz(n)?;
    for q in 0..n {
        s = apply_gate(&s, &GateOp::h(q))?;
    }
    Ok(s.approx_eq(&ncoupled_state(n, Parity::Even)?, 1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::gram_deviation;

    fn ket(n: usize, terms: &[(&str, f64)]) -> StateVector {
        let mut amps = vec![ZERO; 1 << n];
        for (b, a) in terms {
            amps[bits::parse_bit_string(b).unwrap()] = Complex64::new(*a, 0.0);
        }
        StateVector::from_amplitudes(n, amps).unwrap()
    }

    #[test]
    fn small_parity_sets() {
        assert_eq!(parity_set(2, Parity::Even).unwrap().bit_strings(), ["00", "11"]);
        assert_eq!(parity_set(2, Parity::Odd).unwrap().bit_strings(), ["01", "10"]);
        assert_eq!(
            parity_set(3, Parity::Odd).unwrap().bit_strings(),
            ["001", "010", "100", "111"]
        );
        assert!(parity_set(0, Parity::Even).is_err());
    }

    #[test]
    fn small_states() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(ncoupled_state(2, Parity::Even)
            .unwrap()
            .approx_eq(&ket(2, &[("00", h), ("11", h)]), 1e-15));
        let odd3 = ket(3, &[("001", 0.5), ("010", 0.5), ("100", 0.5), ("111", 0.5)]);
        assert!(ncoupled_state(3, Parity::Odd).unwrap().approx_eq(&odd3, 1e-15));
        assert_eq!(ncoupled_state(1, Parity::Even).unwrap(), StateVector::zero(1).unwrap());
    }

    #[test]
    fn circuits_prepare_states() {
        for n in 1..=8 {
            for parity in [Parity::Even, Parity::Odd] {
                let c = preparation_circuit(n, parity).unwrap();
                assert_eq!(c.len(), 2 * n - 2 + parity.bit());
                assert!(c.iter().all(GateOp::is_clifford));
                let out = apply_circuit(&StateVector::zero(n).unwrap(), &c).unwrap();
                assert!(out.approx_eq(&ncoupled_state(n, parity).unwrap(), 1e-12));
            }
        }
        assert!(preparation_circuit(1, Parity::Even).unwrap().is_empty());
    }

    #[test]
    fn odd_flip_position_is_free() {
        for flip in 0..4 {
            let c = preparation_circuit_with_flip(4, Parity::Odd, flip).unwrap();
            let out = apply_circuit(&StateVector::zero(4).unwrap(), &c).unwrap();
            assert!(out.approx_eq(&ncoupled_state(4, Parity::Odd).unwrap(), 1e-12));
        }
    }

    #[test]
    fn three_qubit_basis_rows() {
        let basis = ncoupled_basis(3).unwrap();
        let psi2 = ket(3, &[("000", 0.5), ("011", -0.5), ("101", -0.5), ("110", 0.5)]);
        let psi8 = ket(3, &[("001", 0.5), ("010", -0.5), ("100", 0.5), ("111", -0.5)]);
        assert!(basis[0b001].approx_eq(&psi2, 1e-12));
        assert!(basis[0b111].approx_eq(&psi8, 1e-12));
        assert!(gram_deviation(&basis).unwrap().1 < 1e-12);
    }

    #[test]
    fn three_qubit_labels() {
        let words: Vec<String> = local_pauli_basis(3)
            .unwrap()
            .iter()
            .map(|l| l.pauli_word.to_string())
            .collect();
        assert_eq!(words[0b001], "+ZZI");
        assert_eq!(words[0b101], "-iYZI");
        assert_eq!(words[0b111], "+XZI");
        assert!(words.iter().all(|w| w.ends_with('I')));
    }

    #[test]
    fn labels_reproduce_circuit_basis_exactly() {
        for n in 2..=6 {
            let basis = ncoupled_basis(n).unwrap();
            for (label, b) in local_pauli_basis(n).unwrap().iter().zip(&basis) {
                assert!(label.state().unwrap().approx_eq(b, 1e-12));
            }
        }
    }

    #[test]
    fn ghz_relation() {
        for n in 1..=10 {
            assert!(ghz_relation_check(n).unwrap());
        }
    }

    #[test]
    fn basis_size_cap() {
        assert!(matches!(ncoupled_basis(11), Err(Error::UnsupportedSize { .. })));
    }
}
