//! Dense coding over n-coupled and χ states.
//!
//! Two protocols are simulated end to end. With a shared dictionary, Alice
//! applies a Pauli word to her half of a shared state and Bob measures in the
//! matching orthonormal basis. Without one, Alice holds all but the last qubit
//! of `|ψ_n^+⟩` and Bob decodes with the inverse preparation circuit.

use num_complex::Complex64;
use serde::Serialize;

use crate::bits::{self, qubit_mask};
use crate::error::{Error, Result};
use crate::ncoupled::{basis_label, ncoupled_basis, ncoupled_state, preparation_circuit, Parity};
use crate::pauli::{Letter, PauliString, Phase};
use crate::statevec::{
    apply_circuit, inner_product, inverse_circuit, reduced_density_matrix, DensityMatrix, GateOp,
    StateVector,
};

/// `σ^0, σ^1, σ^2, σ^3 = 𝟙, X, Y, Z`
pub fn sigma(k: usize) -> Letter {
    Letter::ALL[k % 4]
}

/// Encoupled state with `-1` phases on a chosen set of basis strings.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiState {
    pub n: usize,
    pub state: StateVector,
    /// Basis indices carrying the `-1` phase, ascending.
    pub minus_sign_support: Vec<usize>,
}

impl ChiState {
    /// Every minus-sign string has the form `a b … ¬a ¬b …`.
    pub fn is_self_complementary(&self) -> bool {
        let half = self.n / 2;
        let low = (1usize << half) - 1;
        self.minus_sign_support.iter().all(|&s| (s >> half) ^ (s & low) == low)
    }
}

fn check_chi_n(n: usize) -> Result<()> {
    if n != 4 && n != 6 {
        return Err(Error::InvalidParameter(format!("χ states exist for n = 4 and n = 6, got {n}")));
    }
    Ok(())
}

/// χ state on 4 or 6 qubits.
///
/// `n = 4` flips the signs of `0011` and `0101` in `|ψ_4^+⟩`. `n = 6` flips
/// the eight strings `abc¬a¬b¬c` with `abc ∈ {000, 011, 101, 110, 001, 010,
/// 100, 111}`; these all have odd weight, so the base is `|ψ_6^-⟩`.
pub fn chi_state(n: usize) -> Result<ChiState> {
    check_chi_n(n)?;
    let (parity, minus): (Parity, Vec<usize>) = if n == 4 {
        (Parity::Even, vec![0b0011, 0b0101])
    } else {
        let mut v: Vec<usize> = (0..8usize).map(|abc| (abc << 3) | (!abc & 0b111)).collect();
        v.sort_unstable();
        (Parity::Odd, v)
    };
    let base = ncoupled_state(n, parity)?;
    let mut amps = base.into_amplitudes();
    for &s in &minus {
        amps[s] = -amps[s];
    }
    let state = StateVector::from_amplitudes(n, amps)?;
    Ok(ChiState { n, state, minus_sign_support: minus })
}

/// `⊗_j σ^{k_j}` on the first `k` of `n` qubits, `word` giving two bits per qubit.
fn sigma_word(n: usize, k: usize, word: usize) -> Result<PauliString> {
    let mut letters = vec![Letter::I; n];
    for (j, l) in letters.iter_mut().enumerate().take(k) {
        *l = sigma((word >> (2 * (k - 1 - j))) & 0b11);
    }
    PauliString::from_letters(Phase::ONE, &letters)
}

/// All `4^k` states `σ^{i_1} ⊗ … ⊗ σ^{i_k} ⊗ 𝟙 |base⟩`, in word order.
pub fn local_word_basis(base: &StateVector, k: usize) -> Result<Vec<StateVector>> {
    let n = base.num_qubits();
    if k == 0 || k > n {
        return Err(Error::QubitOutOfRange { qubit: k, n });
    }
    (0..1usize << (2 * k)).map(|w| sigma_word(n, k, w)?.apply(base)).collect()
}

/// Pauli words on the first `n/2` qubits applied to the χ state.
pub fn chi_basis(n: usize) -> Result<Vec<StateVector>> {
    local_word_basis(&chi_state(n)?.state, n / 2)
}

/// Index pairs `(i, j)`, `i < j`, whose states coincide up to a phase.
pub fn repeated_rays(states: &[StateVector], tol: f64) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            if (inner_product(&states[i], &states[j])?.norm() - 1.0).abs() <= tol {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

/// `2^n / 8 ≤ 2^{n/2}`: enough self-complementary strings to carry the phases.
pub fn counting_bound(n: usize) -> Result<bool> {
    if n % 2 == 1 || n < 4 {
        return Err(Error::InvalidParameter(format!("counting bound needs even n ≥ 4, got {n}")));
    }
    if n >= 64 {
        return Ok(false);
    }
    Ok((1u64 << n) / 8 <= 1u64 << (n / 2))
}

/// Message-indexed table of Pauli words for the sender.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Encoding {
    pub message_bits: usize,
    /// Qubits `0..sender_qubits` belong to the sender.
    pub sender_qubits: usize,
    pub table: Vec<PauliString>,
}

impl Encoding {
    pub fn word(&self, message: usize) -> &PauliString {
        &self.table[message]
    }

    /// No two messages share a word (phases ignored), and every word is the
    /// identity outside the sender's qubits.
    pub fn is_valid(&self) -> bool {
        let n = self.table.first().map_or(0, PauliString::num_qubits);
        let outside: u64 = (self.sender_qubits..n).map(|q| qubit_mask(n, q) as u64).sum();
        let local = self.table.iter().all(|w| (w.x_mask() | w.z_mask()) & outside == 0);
        let distinct = (0..self.table.len())
            .all(|i| (i + 1..self.table.len()).all(|j| !self.table[i].same_letters(&self.table[j])));
        local && distinct
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    /// `n = 3` over the n-coupled basis, `n = 4, 6` over the χ basis.
    SharedDictionary,
    DictionaryFree,
}

fn shared_setup(n: usize) -> Result<(Encoding, StateVector, Vec<StateVector>)> {
    match n {
        3 => {
            let table = (0..8).map(|b| Ok(basis_label(3, b)?.pauli_word)).collect::<Result<_>>()?;
            let enc = Encoding { message_bits: 3, sender_qubits: 2, table };
            Ok((enc, ncoupled_state(3, Parity::Even)?, ncoupled_basis(3)?))
        }
        4 | 6 => {
            let k = n / 2;
            let table = (0..1usize << n).map(|w| sigma_word(n, k, w)).collect::<Result<_>>()?;
            let enc = Encoding { message_bits: n, sender_qubits: k, table };
            Ok((enc, chi_state(n)?.state, chi_basis(n)?))
        }
        _ => Err(Error::InvalidParameter(format!(
            "shared-dictionary coding is defined for n = 3, 4, 6, got {n}"
        ))),
    }
}

pub fn shared_dictionary_encoding(n: usize) -> Result<Encoding> {
    Ok(shared_setup(n)?.0)
}

/// Largest `n` for the dictionary-free protocol.
pub const MAX_DICTIONARY_FREE_QUBITS: usize = 8;

fn check_df_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    if n > MAX_DICTIONARY_FREE_QUBITS {
        return Err(Error::UnsupportedSize {
            what: "dictionary-free coding",
            n,
            max: MAX_DICTIONARY_FREE_QUBITS,
        });
    }
    Ok(())
}

/// Reverse the order of input qubits `1..n`, then run the preparation circuit.
///
/// Both this and the plain preparation circuit take `|0…0⟩` to `|ψ_n^+⟩`;
/// with the reversal, `m ↦ E(m)|ψ_n^+⟩` for the encoding table below.
pub fn dictionary_free_circuit(n: usize) -> Result<Vec<GateOp>> {
    check_df_n(n)?;
    let mut gates = Vec::new();
    let (mut a, mut b) = (1, n - 1);
    while a < b {
        gates.push(GateOp::cnot(a, b)?);
        gates.push(GateOp::cnot(b, a)?);
        gates.push(GateOp::cnot(a, b)?);
        a += 1;
        b -= 1;
    }
    gates.extend(preparation_circuit(n, Parity::Even)?);
    Ok(gates)
}

fn reverse_tail(n: usize, m: usize) -> usize {
    let mut out = m & qubit_mask(n, 0);
    for q in 1..n {
        if m & qubit_mask(n, q) != 0 {
            out |= qubit_mask(n, n - q);
        }
    }
    out
}

/// `E(m)` acting on qubits `0..n-1`; Bob's qubit `n-1` is untouched.
pub fn dictionary_free_encoding(n: usize) -> Result<Encoding> {
    check_df_n(n)?;
    let table = (0..1usize << n)
        .map(|m| Ok(basis_label(n, reverse_tail(n, m))?.pauli_word))
        .collect::<Result<_>>()?;
    Ok(Encoding { message_bits: n, sender_qubits: n - 1, table })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolTranscript {
    pub protocol: Protocol,
    pub n: usize,
    pub message: String,
    pub word: PauliString,
    pub encoded_state: StateVector,
    pub decoder_outcome: String,
    /// Probability that Bob's measurement returns the sent message.
    pub success_probability: f64,
    pub success: bool,
    /// Alice's qubits as seen in transit (dictionary-free only).
    pub eve_view: Option<DensityMatrix>,
}

/// Most likely outcome; ties go to the lowest index.
fn argmax(p: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in p.iter().enumerate() {
        if v > p[best] {
            best = i;
        }
    }
    best
}

pub fn shared_dictionary_protocol(n: usize, message: &str) -> Result<ProtocolTranscript> {
    let (enc, base, basis) = shared_setup(n)?;
    let m = bits::parse_bits_exact(message, n)?;
    let word = *enc.word(m);
    let encoded = word.apply(&base)?;
    let probs = basis
        .iter()
        .map(|b| Ok(inner_product(b, &encoded)?.norm_sqr()))
        .collect::<Result<Vec<f64>>>()?;
    let outcome = argmax(&probs);
    Ok(ProtocolTranscript {
        protocol: Protocol::SharedDictionary,
        n,
        message: message.to_owned(),
        word,
        encoded_state: encoded,
        decoder_outcome: bits::to_bit_string(n, outcome),
        success_probability: probs[m],
        success: outcome == m,
        eve_view: None,
    })
}

pub fn dictionary_free_protocol(n: usize, message: &str) -> Result<ProtocolTranscript> {
    let enc = dictionary_free_encoding(n)?;
    let m = bits::parse_bits_exact(message, n)?;
    let circuit = dictionary_free_circuit(n)?;
    let shared = apply_circuit(&StateVector::zero(n)?, &circuit)?;
    let word = *enc.word(m);
    let encoded = word.apply(&shared)?;
    let decoded = apply_circuit(&encoded, &inverse_circuit(&circuit))?;
    let probs: Vec<f64> = decoded.amplitudes().iter().map(Complex64::norm_sqr).collect();
    let outcome = argmax(&probs);
    let keep: Vec<usize> = (0..n - 1).collect();
    Ok(ProtocolTranscript {
        protocol: Protocol::DictionaryFree,
        n,
        message: message.to_owned(),
        word,
        eve_view: Some(reduced_density_matrix(&encoded, &keep)?),
        encoded_state: encoded,
        decoder_outcome: bits::to_bit_string(n, outcome),
        success_probability: probs[m],
        success: outcome == m,
    })
}

pub fn run_protocol(protocol: Protocol, n: usize, message: &str) -> Result<ProtocolTranscript> {
    match protocol {
        Protocol::SharedDictionary => shared_dictionary_protocol(n, message),
        Protocol::DictionaryFree => dictionary_free_protocol(n, message),
    }
}

/// Every message of the protocol, in index order.
pub fn sweep(protocol: Protocol, n: usize) -> Result<Vec<ProtocolTranscript>> {
    if n >= usize::BITS as usize {
        return Err(Error::UnsupportedSize { what: "message sweep", n, max: 8 });
    }
    (0..1usize << n)
        .map(|m| run_protocol(protocol, n, &bits::to_bit_string(n, m)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EveReport {
    pub message: String,
    pub reduced_state: DensityMatrix,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Outcome probabilities in the `(n-1)`-coupled basis.
    pub coupled_distribution: Vec<f64>,
    /// 1-based labels of the two `(n-1)`-coupled states in the mixture.
    pub pair: (usize, usize),
    /// The reduced state is `½(|ψ^i⟩⟨ψ^i| + |ψ^j⟩⟨ψ^j|)` within 1e-9.
    pub equal_mixture: bool,
}

/// What an interceptor of Alice's qubits holds in the dictionary-free protocol.
pub fn eve_analysis(n: usize, message: &str) -> Result<EveReport> {
    let t = dictionary_free_protocol(n, message)?;
    let rho = t.eve_view.expect("dictionary-free transcripts carry the intercepted state");
    let basis = ncoupled_basis(n - 1)?;
    let dist = basis.iter().map(|b| rho.expectation(b)).collect::<Result<Vec<f64>>>()?;
    let mut order: Vec<usize> = (0..dist.len()).collect();
    order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(a.cmp(&b)));
    let (i, j) = (order[0].min(order[1]), order[0].max(order[1]));
    let mixture = DensityMatrix::mixture(&[(0.5, &basis[i]), (0.5, &basis[j])])?;
    let eigenvalues = rho.eigenvalues();
    Ok(EveReport {
        message: t.message,
        equal_mixture: rho.max_deviation(&mixture) < 1e-9,
        reduced_state: rho,
        eigenvalues,
        coupled_distribution: dist,
        pair: (i + 1, j + 1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EveMeasurement {
    Computational,
    /// The `(n-1)`-coupled basis.
    Coupled,
}

/// Success probability of Eve's best guess of the whole message from one
/// measurement of the intercepted qubits, messages uniformly distributed.
pub fn eve_guess_probability(n: usize, measurement: EveMeasurement) -> Result<f64> {
    let views = sweep(Protocol::DictionaryFree, n)?;
    let outcomes: Vec<StateVector> = match measurement {
        EveMeasurement::Computational => (0..1usize << (n - 1))
            .map(|k| StateVector::basis(n - 1, k))
            .collect::<Result<_>>()?,
        EveMeasurement::Coupled => ncoupled_basis(n - 1)?,
    };
    let mut total = 0.0;
    for o in &outcomes {
        let mut best = 0.0f64;
        for t in &views {
            best = best.max(t.eve_view.as_ref().expect("intercepted state").expectation(o)?);
        }
        total += best;
    }
    Ok(total / views.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "protocol", rename_all = "kebab-case")]
pub enum TransferScheme {
    /// One Bell pair per two bits.
    Traditional,
    SharedDictionary { n: usize },
    DictionaryFree { n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TransferCount {
    pub qubit_transfers: usize,
    pub qubits_used: usize,
}

/// Qubit transfers and qubits consumed to move `payload_bits`, counting the
/// distribution of the shared state by a third party plus Alice's send.
///
/// Payloads that do not fill a whole round are rounded up.
pub fn transfer_accounting(scheme: TransferScheme, payload_bits: usize) -> Result<TransferCount> {
    // (bits per round, qubits per round, qubits Alice sends per round)
    let (bits, qubits, alice) = match scheme {
        TransferScheme::Traditional => (2, 2, 1),
        TransferScheme::SharedDictionary { n: 3 } => (3, 3, 2),
        TransferScheme::SharedDictionary { n: n @ (4 | 6) } => (n, n, n / 2),
        TransferScheme::SharedDictionary { n } => {
            return Err(Error::InvalidParameter(format!(
                "shared-dictionary coding is defined for n = 3, 4, 6, got {n}"
            )))
        }
        TransferScheme::DictionaryFree { n } => {
            check_df_n(n)?;
            (n, n, n - 1)
        }
    };
    let rounds = payload_bits.div_ceil(bits);
    Ok(TransferCount { qubit_transfers: rounds * (qubits + alice), qubits_used: rounds * qubits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::{gram_deviation, measurement_distribution};

    #[test]
    fn chi4_amplitudes() {
        let chi = chi_state(4).unwrap();
        let a = 1.0 / (2.0 * std::f64::consts::SQRT_2);
        assert!((chi.state.amplitude(0b0011).re + a).abs() < 1e-15);
        assert!((chi.state.amplitude(0b0000).re - a).abs() < 1e-15);
        assert!(!chi.is_self_complementary());
        let sxx = PauliString::from_letters(Phase::ONE, &[Letter::X, Letter::X, Letter::I, Letter::I]).unwrap();
        assert!(!sxx.apply(&chi.state).unwrap().same_ray(&chi.state, 1e-9));
    }

    #[test]
    fn chi6_amplitudes() {
        let chi = chi_state(6).unwrap();
        let a = 1.0 / (4.0 * std::f64::consts::SQRT_2);
        assert!((chi.state.amplitude(0b000111).re + a).abs() < 1e-15);
        assert_eq!(chi.minus_sign_support.len(), 8);
        assert!(chi.is_self_complementary());
        assert!((chi.state.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chi_bases_are_orthonormal() {
        for n in [4, 6] {
            let b = chi_basis(n).unwrap();
            assert_eq!(b.len(), 1 << n);
            assert!(gram_deviation(&b).unwrap().1 < 1e-9);
        }
        assert!(chi_state(5).is_err());
    }

    #[test]
    fn psi4_word_basis_repeats_rays() {
        let b = local_word_basis(&ncoupled_state(4, Parity::Even).unwrap(), 2).unwrap();
        let reps = repeated_rays(&b, 1e-9).unwrap();
        // identity and σ¹⊗σ¹ give the same state
        assert!(reps.contains(&(0, 0b0101)));
    }

    #[test]
    fn chi_statistics_match_base() {
        let chi4 = chi_state(4).unwrap();
        assert_eq!(
            measurement_distribution(&chi4.state),
            measurement_distribution(&ncoupled_state(4, Parity::Even).unwrap())
        );
    }

    #[test]
    fn counting_bounds() {
        assert!(counting_bound(4).unwrap());
        assert!(counting_bound(6).unwrap());
        assert!(!counting_bound(8).unwrap());
        assert!(counting_bound(5).is_err());
    }

    #[test]
    fn shared_n3_message_101() {
        let t = shared_dictionary_protocol(3, "101").unwrap();
        assert_eq!(t.word.to_string(), "-iYZI");
        assert_eq!(t.decoder_outcome, "101");
        assert!(t.success);
    }

    #[test]
    fn shared_sweeps_succeed() {
        for n in [3, 4, 6] {
            for t in sweep(Protocol::SharedDictionary, n).unwrap() {
                assert!(t.success && (t.success_probability - 1.0).abs() < 1e-9, "{n} {}", t.message);
            }
        }
        assert!(matches!(
            shared_dictionary_protocol(4, "000"),
            Err(Error::MessageLength { expected: 4, found: 3 })
        ));
    }

    #[test]
    fn dictionary_free_tables() {
        let e3 = dictionary_free_encoding(3).unwrap();
        let words: Vec<String> = e3.table.iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["+III", "+ZII", "+ZZI", "+IZI", "+XII", "-iYII", "-iYZI", "+XZI"]);
        let e4 = dictionary_free_encoding(4).unwrap();
        assert_eq!(e4.word(0b1111).to_string(), "-iYIZI");
        assert_eq!(e4.word(0b0100).to_string(), "+ZZZI");
        assert!(e3.is_valid() && e4.is_valid());
    }

    #[test]
    fn dictionary_free_round_trips() {
        for n in [3, 4] {
            for t in sweep(Protocol::DictionaryFree, n).unwrap() {
                assert!(t.success && (t.success_probability - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eve_sees_a_two_state_mixture() {
        for n in [3, 4] {
            for m in 0..1usize << n {
                let r = eve_analysis(n, &bits::to_bit_string(n, m)).unwrap();
                assert!(r.equal_mixture);
                assert!((r.eigenvalues[0] - 0.5).abs() < 1e-9 && (r.eigenvalues[1] - 0.5).abs() < 1e-9);
                assert!(r.eigenvalues[2..].iter().all(|l| l.abs() < 1e-9));
            }
        }
        for meas in [EveMeasurement::Computational, EveMeasurement::Coupled] {
            assert!(eve_guess_probability(3, meas).unwrap() < 1.0);
        }
    }

    #[test]
    fn accounting() {
        let c = |s, b| transfer_accounting(s, b).unwrap();
        assert_eq!(c(TransferScheme::Traditional, 4), TransferCount { qubit_transfers: 6, qubits_used: 4 });
        assert_eq!(c(TransferScheme::SharedDictionary { n: 3 }, 3), TransferCount { qubit_transfers: 5, qubits_used: 3 });
        assert_eq!(c(TransferScheme::SharedDictionary { n: 6 }, 6), TransferCount { qubit_transfers: 9, qubits_used: 6 });
        assert_eq!(c(TransferScheme::DictionaryFree { n: 3 }, 3), TransferCount { qubit_transfers: 5, qubits_used: 3 });
    }
}
