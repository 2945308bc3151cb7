//! Stabiliser codes whose codewords are encoupled states.
//!
//! A [`CodeSpec`] is a pair of orthonormal codewords. Its stabiliser group is
//! found directly (every signed Pauli word fixing both codewords) and reduced
//! to an independent generating set; errors are then classified by their
//! syndromes against those generators.

use num_complex::Complex64;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::bits;
use crate::error::{Error, Result};
use crate::ncoupled::{ncoupled_state, Parity};
use crate::pauli::{Letter, PauliString, Phase};
use crate::statevec::{inner_product, StateVector, ZERO};

/// Exhaustive stabiliser search covers `4^n` words up to this size.
pub const MAX_SEARCH_QUBITS: usize = 8;

const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeFamily {
    /// `|0̄⟩ = |ψ_n^+⟩`, `|1̄⟩ = |ψ_n^-⟩`
    Base,
    /// `|1̄⟩ = Z_n |ψ_n^+⟩`
    OnePhase,
    /// `|1̄⟩ = Z_{n-1} Z_n |ψ_n^+⟩`
    TwoPhase,
    /// `|1̄⟩ = Z_{n-2} Z_{n-1} Z_n |ψ_n^+⟩`
    ThreePhase,
    FiveQubit,
    Custom,
}

impl fmt::Display for CodeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeFamily::Base => "base",
            CodeFamily::OnePhase => "one-phase",
            CodeFamily::TwoPhase => "two-phase",
            CodeFamily::ThreePhase => "three-phase",
            CodeFamily::FiveQubit => "five-qubit",
            CodeFamily::Custom => "custom",
        })
    }
}

impl FromStr for CodeFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "base" => Ok(CodeFamily::Base),
            "one-phase" => Ok(CodeFamily::OnePhase),
            "two-phase" => Ok(CodeFamily::TwoPhase),
            "three-phase" => Ok(CodeFamily::ThreePhase),
            "five-qubit" => Ok(CodeFamily::FiveQubit),
            _ => Err(Error::UnrecognizedCode(s.to_owned())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodeSpec {
    pub n: usize,
    pub codeword_zero: StateVector,
    pub codeword_one: StateVector,
    pub label: String,
    pub family: CodeFamily,
}

impl CodeSpec {
    /// User-supplied codewords; must be orthonormal.
    pub fn custom(label: &str, zero: StateVector, one: StateVector) -> Result<Self> {
        let n = zero.num_qubits();
        if one.num_qubits() != n {
            return Err(Error::DimensionMismatch { expected: n, found: one.num_qubits() });
        }
        let overlap = inner_product(&zero, &one)?.norm();
        if overlap > TOL {
            return Err(Error::InvalidParameter(format!("codewords overlap by {overlap:.3e}")));
        }
        Ok(Self { n, codeword_zero: zero, codeword_one: one, label: label.to_owned(), family: CodeFamily::Custom })
    }

    pub fn codewords(&self) -> [&StateVector; 2] {
        [&self.codeword_zero, &self.codeword_one]
    }
}

/// Code of the given family; `n` is ignored for the five-qubit code.
pub fn code(family: CodeFamily, n: usize) -> Result<CodeSpec> {
    let phased = |k: usize, min: usize| -> Result<CodeSpec> {
        if n < min {
            return Err(Error::TooFewQubits { n, min });
        }
        let zero = ncoupled_state(n, Parity::Even)?;
        let flips: Vec<usize> = (n - k..n).collect();
        let one = PauliString::on_qubits(n, &flips, Letter::Z)?.apply(&zero)?;
        Ok(CodeSpec { n, codeword_zero: zero, codeword_one: one, label: format!("{family} n={n}"), family })
    };
    match family {
        CodeFamily::Base => {
            if n < 2 {
                return Err(Error::TooFewQubits { n, min: 2 });
            }
            Ok(CodeSpec {
                n,
                codeword_zero: ncoupled_state(n, Parity::Even)?,
                codeword_one: ncoupled_state(n, Parity::Odd)?,
                label: format!("base n={n}"),
                family,
            })
        }
        CodeFamily::OnePhase => phased(1, 2),
        CodeFamily::TwoPhase => phased(2, 3),
        CodeFamily::ThreePhase => phased(3, 4),
        CodeFamily::FiveQubit => Ok(five_qubit_code()),
        CodeFamily::Custom => Err(Error::UnrecognizedCode("custom".into())),
    }
}

pub fn base_code(n: usize) -> Result<CodeSpec> {
    code(CodeFamily::Base, n)
}

pub fn three_phase_code(n: usize) -> Result<CodeSpec> {
    code(CodeFamily::ThreePhase, n)
}

const FIVE_ZERO: [(&str, f64); 16] = [
    ("00000", 1.0), ("10010", 1.0), ("01001", 1.0), ("10100", 1.0),
    ("01010", 1.0), ("11011", -1.0), ("00110", -1.0), ("11000", -1.0),
    ("11101", -1.0), ("00011", -1.0), ("11110", -1.0), ("01111", -1.0),
    ("10001", -1.0), ("01100", -1.0), ("10111", -1.0), ("00101", 1.0),
];

const FIVE_ONE: [(&str, f64); 16] = [
    ("11111", 1.0), ("01101", 1.0), ("10110", 1.0), ("01011", 1.0),
    ("10101", 1.0), ("00100", -1.0), ("11001", -1.0), ("00111", -1.0),
    ("00010", -1.0), ("11100", -1.0), ("00001", -1.0), ("10000", -1.0),
    ("01110", -1.0), ("10011", -1.0), ("01000", -1.0), ("11010", 1.0),
];

fn sixteen_term(terms: &[(&str, f64); 16]) -> StateVector {
    let mut amps = vec![ZERO; 32];
    for (b, s) in terms {
        amps[bits::parse_bit_string(b).expect("literal bit string")] += Complex64::new(0.25 * s, 0.0);
    }
    StateVector::from_amplitudes(5, amps).expect("sixteen unit-weight terms")
}

/// Perfect five-qubit code with the standard sixteen-term codewords.
pub fn five_qubit_code() -> CodeSpec {
    CodeSpec {
        n: 5,
        codeword_zero: sixteen_term(&FIVE_ZERO),
        codeword_one: sixteen_term(&FIVE_ONE),
        label: "five-qubit".into(),
        family: CodeFamily::FiveQubit,
    }
}

/// `XZZXI` and its cyclic shifts.
pub fn five_qubit_generators() -> Vec<PauliString> {
    ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"].iter().map(|s| s.parse().expect("literal Pauli")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabiliserGenSet {
    pub n: usize,
    pub generators: Vec<PauliString>,
}

impl StabiliserGenSet {
    /// Rejects generator lists that do not pairwise commute.
    pub fn new(n: usize, generators: Vec<PauliString>) -> Result<Self> {
        for g in &generators {
            if g.num_qubits() != n {
                return Err(Error::DimensionMismatch { expected: n, found: g.num_qubits() });
            }
        }
        let set = Self { n, generators };
        if !set.is_abelian() {
            return Err(Error::InvalidParameter("generators do not commute".into()));
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.symplectic_product(b) == 0))
    }

    /// Every generator fixes both codewords within `tol`.
    pub fn stabilises(&self, code: &CodeSpec, tol: f64) -> Result<bool> {
        for g in &self.generators {
            for c in code.codewords() {
                if !g.apply(c)?.approx_eq(c, tol) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether `p` (with its sign) lies in the generated group.
    pub fn contains(&self, p: &PauliString) -> Result<bool> {
        let n = self.n;
        if p.num_qubits() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.num_qubits() });
        }
        // Solve for the generator subset with matching letters, then compare the sign.
        let rows: Vec<u128> = self.generators.iter().map(symplectic).collect();
        let target = symplectic(p);
        let Some(subset) = solve_gf2(&rows, target) else { return Ok(false) };
        let mut prod = PauliString::identity(n)?;
        for (i, g) in self.generators.iter().enumerate() {
            if subset >> i & 1 == 1 {
                prod = prod.mul(g)?;
            }
        }
        Ok(prod == *p)
    }
}

fn symplectic(p: &PauliString) -> u128 {
    ((p.x_mask() as u128) << 64) | p.z_mask() as u128
}

/// Insert `v` into an XOR basis; returns false if already spanned.
fn insert_gf2(basis: &mut Vec<u128>, mut v: u128) -> bool {
    for &b in basis.iter() {
        v = v.min(v ^ b);
    }
    if v == 0 {
        return false;
    }
    basis.push(v);
    basis.sort_unstable_by(|a, b| b.cmp(a));
    true
}

/// Bitmask of rows whose XOR equals `target`, if one exists.
fn solve_gf2(rows: &[u128], target: u128) -> Option<u64> {
    // reduced basis entries carry the set of original rows they combine
    let mut basis: Vec<(u128, u64)> = Vec::new();
    for (i, &r) in rows.iter().enumerate() {
        let mut v = (r, 1u64 << i);
        for &(b, m) in &basis {
            if v.0 ^ b < v.0 {
                v = (v.0 ^ b, v.1 ^ m);
            }
        }
        if v.0 != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        }
    }
    let mut t = (target, 0u64);
    for &(b, m) in &basis {
        if t.0 ^ b < t.0 {
            t = (t.0 ^ b, t.1 ^ m);
        }
    }
    (t.0 == 0).then_some(t.1)
}

/// `X_i X_{i+1}` for `i = 0..n-1`.
pub fn chain_generators(n: usize) -> Result<Vec<PauliString>> {
    (0..n.saturating_sub(1)).map(|i| PauliString::on_qubits(n, &[i, i + 1], Letter::X)).collect()
}

/// Every signed Pauli word that fixes both codewords.
pub fn stabiliser_group(code: &CodeSpec) -> Result<Vec<PauliString>> {
    let n = code.n;
    if n > MAX_SEARCH_QUBITS {
        return Err(Error::UnsupportedSize { what: "stabiliser search", n, max: MAX_SEARCH_QUBITS });
    }
    let mut out = Vec::new();
    for x in 0..1u64 << n {
        for z in 0..1u64 << n {
            let p = PauliString::from_masks(n, x, z, Phase::ONE)?;
            let l0 = p.expectation(&code.codeword_zero)?;
            if (l0.norm() - 1.0).abs() > TOL || l0.im.abs() > TOL {
                continue;
            }
            let l1 = p.expectation(&code.codeword_one)?;
            if (l1 - l0).norm() > TOL {
                continue;
            }
            out.push(if l0.re > 0.0 { p } else { p.with_phase(Phase::MINUS_ONE) });
        }
    }
    Ok(out)
}

/// Preference order for generators: fewer `Y`, lower weight, then shorter span.
fn generator_rank(p: &PauliString) -> (usize, usize, usize, usize, String) {
    let support: Vec<usize> = (0..p.num_qubits()).filter(|&q| p.letter(q) != Letter::I).collect();
    let first = support.first().copied().unwrap_or(0);
    let span = support.last().map_or(0, |l| l - first);
    let letters: String = p.letters().iter().map(|l| l.symbol()).collect();
    (p.count(Letter::Y), p.weight(), span, first, letters)
}

/// Independent generators of the code's stabiliser group.
///
/// The base code uses the `X_i X_{i+1}` chain. The five-qubit code uses the
/// cyclic `XZZXI` family. Every other code is searched exhaustively.
pub fn stabiliser_generators(code: &CodeSpec) -> Result<StabiliserGenSet> {
    let gens = match code.family {
        CodeFamily::Base => chain_generators(code.n)?,
        CodeFamily::FiveQubit => five_qubit_generators(),
        _ => {
            let mut group = stabiliser_group(code)?;
            group.sort_by_cached_key(generator_rank);
            let mut basis = Vec::new();
            let mut gens = Vec::new();
            for p in group.into_iter().filter(|p| !p.is_identity()) {
                if insert_gf2(&mut basis, symplectic(&p)) {
                    gens.push(p);
                }
            }
            gens
        }
    };
    if gens.is_empty() {
        return Err(Error::NoGenerators(code.label.clone()));
    }
    let set = StabiliserGenSet::new(code.n, gens)?;
    if !set.stabilises(code, TOL)? {
        return Err(Error::InvalidParameter(format!("generators do not stabilise {}", code.label)));
    }
    Ok(set)
}

/// One bit per generator: 1 where the error anticommutes with it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Syndrome {
    pub bits: Vec<u8>,
}

impl Syndrome {
    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl Serialize for Syndrome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn pauli_commutes(a: &PauliString, b: &PauliString) -> Result<bool> {
    a.commutes_with(b)
}

pub fn syndrome(error: &PauliString, gens: &StabiliserGenSet) -> Result<Syndrome> {
    if error.num_qubits() != gens.n {
        return Err(Error::DimensionMismatch { expected: gens.n, found: error.num_qubits() });
    }
    Ok(Syndrome { bits: gens.generators.iter().map(|g| error.symplectic_product(g) as u8).collect() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorClass {
    /// Acts as a scalar on the code space.
    Trivial,
    /// Zero syndrome but changes the encoded state.
    Undetectable,
    /// Nonzero syndrome shared with an inequivalent error of the set.
    Detectable,
    /// Nonzero syndrome, unique within the set up to stabiliser equivalence.
    Correctable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifiedError {
    pub error: PauliString,
    pub syndrome: Syndrome,
    pub class: ErrorClass,
}

pub fn classify_errors(code: &CodeSpec, errors: &[PauliString]) -> Result<Vec<ClassifiedError>> {
    classify_errors_with(code, &stabiliser_generators(code)?, errors)
}

pub fn classify_errors_with(
    code: &CodeSpec,
    gens: &StabiliserGenSet,
    errors: &[PauliString],
) -> Result<Vec<ClassifiedError>> {
    let syndromes = errors.iter().map(|e| syndrome(e, gens)).collect::<Result<Vec<_>>>()?;
    let mut by_syndrome: HashMap<&Syndrome, Vec<usize>> = HashMap::new();
    for (i, s) in syndromes.iter().enumerate() {
        by_syndrome.entry(s).or_default().push(i);
    }
    let mut out = Vec::with_capacity(errors.len());
    for (i, (e, s)) in errors.iter().zip(&syndromes).enumerate() {
        let class = if s.is_zero() {
            if acts_trivially(code, e)? {
                ErrorClass::Trivial
            } else {
                ErrorClass::Undetectable
            }
        } else {
            // errors sharing a syndrome are still told apart if they differ by a stabiliser
            let mut unique = true;
            for &j in &by_syndrome[s] {
                if j != i && !acts_trivially(code, &e.mul(&errors[j])?)? {
                    unique = false;
                    break;
                }
            }
            if unique {
                ErrorClass::Correctable
            } else {
                ErrorClass::Detectable
            }
        };
        out.push(ClassifiedError { error: *e, syndrome: s.clone(), class });
    }
    Ok(out)
}

fn acts_trivially(code: &CodeSpec, e: &PauliString) -> Result<bool> {
    let c0 = e.expectation(&code.codeword_zero)?;
    let c1 = e.expectation(&code.codeword_one)?;
    Ok((c0.norm() - 1.0).abs() <= TOL && (c0 - c1).norm() <= TOL)
}

/// Every error in the set is correctable or acts trivially.
pub fn all_correctable(classes: &[ClassifiedError]) -> bool {
    classes
        .iter()
        .all(|c| matches!(c.class, ErrorClass::Correctable | ErrorClass::Trivial))
}

/// `⟨ī|E_a† E_b|j̄⟩ = C_ab δ_ij` for every pair of errors.
pub fn knill_laflamme(code: &CodeSpec, errors: &[PauliString]) -> Result<bool> {
    let words = code.codewords();
    let moved: Vec<[StateVector; 2]> = errors
        .iter()
        .map(|e| Ok([e.apply(words[0])?, e.apply(words[1])?]))
        .collect::<Result<_>>()?;
    for a in &moved {
        for b in &moved {
            let m00 = inner_product(&a[0], &b[0])?;
            let m11 = inner_product(&a[1], &b[1])?;
            let m01 = inner_product(&a[0], &b[1])?;
            let m10 = inner_product(&a[1], &b[0])?;
            if m01.norm() > TOL || m10.norm() > TOL || (m00 - m11).norm() > TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `letter` on each qubit in turn.
pub fn single_qubit_errors(n: usize, letter: Letter) -> Result<Vec<PauliString>> {
    (0..n).map(|q| PauliString::single(n, q, letter)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "operator", rename_all = "kebab-case")]
pub enum LogicalOp {
    Pauli(PauliString),
    /// Measurement of the observable rather than a unitary gate.
    ParityCheck(PauliString),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogicalOps {
    pub x: LogicalOp,
    pub z: LogicalOp,
    /// Taken from the standard literature rather than derived here.
    pub external: bool,
}

pub fn logical_ops(code: &CodeSpec) -> Result<LogicalOps> {
    let n = code.n;
    let all = |l| PauliString::on_qubits(n, &(0..n).collect::<Vec<_>>(), l);
    let tail_z = |k: usize| PauliString::on_qubits(n, &(n - k..n).collect::<Vec<_>>(), Letter::Z);
    let ops = match code.family {
        CodeFamily::Base => LogicalOps {
            x: LogicalOp::Pauli(PauliString::single(n, 0, Letter::X)?),
            z: LogicalOp::ParityCheck(all(Letter::Z)?),
            external: false,
        },
        CodeFamily::OnePhase => LogicalOps { x: LogicalOp::Pauli(tail_z(1)?), z: LogicalOp::Unknown, external: false },
        CodeFamily::TwoPhase => LogicalOps { x: LogicalOp::Pauli(tail_z(2)?), z: LogicalOp::Unknown, external: false },
        CodeFamily::ThreePhase => LogicalOps { x: LogicalOp::Pauli(tail_z(3)?), z: LogicalOp::Unknown, external: false },
        CodeFamily::FiveQubit => LogicalOps {
            x: LogicalOp::Pauli(all(Letter::X)?),
            z: LogicalOp::Pauli(all(Letter::Z)?),
            external: true,
        },
        CodeFamily::Custom => return Err(Error::UnrecognizedCode(code.label.clone())),
    };
    Ok(ops)
}

/// `P|0̄⟩ = |1̄⟩` and `P|1̄⟩ = |0̄⟩` within 1e-9.
pub fn swaps_codewords(code: &CodeSpec, p: &PauliString) -> Result<bool> {
    Ok(p.apply(&code.codeword_zero)?.approx_eq(&code.codeword_one, TOL)
        && p.apply(&code.codeword_one)?.approx_eq(&code.codeword_zero, TOL))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiveQubitReport {
    pub orthonormal: bool,
    pub parity_sorted: bool,
    pub uniform_magnitude: bool,
    /// Generators are the cyclic `XZZXI` family from the standard literature.
    pub generators: Vec<PauliString>,
    pub generators_external: bool,
    pub stabilised: bool,
    pub logical_x_swaps: bool,
    pub logical_z_phase: bool,
}

impl FiveQubitReport {
    pub fn passes(&self) -> bool {
        self.orthonormal
            && self.parity_sorted
            && self.uniform_magnitude
            && self.stabilised
            && self.logical_x_swaps
            && self.logical_z_phase
    }
}

pub fn five_qubit_code_check() -> Result<FiveQubitReport> {
    let code = five_qubit_code();
    let [zero, one] = code.codewords();
    let orthonormal = inner_product(zero, one)?.norm() < TOL
        && (zero.norm() - 1.0).abs() < TOL
        && (one.norm() - 1.0).abs() < TOL;
    let sorted = |s: &StateVector, parity: Parity| {
        s.support(TOL).iter().all(|&i| Parity::of(i) == parity) && s.support(TOL).len() == 16
    };
    let parity_sorted = sorted(zero, Parity::Even) && sorted(one, Parity::Odd);
    let uniform = |s: &StateVector| s.support(TOL).iter().all(|&i| (s.amplitude(i).norm() - 0.25).abs() < TOL);
    let gens = StabiliserGenSet::new(5, five_qubit_generators())?;
    let zz = PauliString::on_qubits(5, &[0, 1, 2, 3, 4], Letter::Z)?;
    let logical_z_phase = zz.apply(zero)?.approx_eq(zero, TOL) && zz.apply(one)?.approx_eq(&one.with_global_phase(Complex64::new(-1.0, 0.0)), TOL);
    let xx = PauliString::on_qubits(5, &[0, 1, 2, 3, 4], Letter::X)?;
    Ok(FiveQubitReport {
        orthonormal,
        parity_sorted,
        uniform_magnitude: uniform(zero) && uniform(one),
        stabilised: gens.stabilises(&code, TOL)?,
        generators: gens.generators,
        generators_external: true,
        logical_x_swaps: swaps_codewords(&code, &xx)?,
        logical_z_phase,
    })
}

pub fn syndrome_table(gens: &StabiliserGenSet, errors: &[PauliString]) -> Result<Vec<(PauliString, Syndrome)>> {
    errors.iter().map(|e| Ok((*e, syndrome(e, gens)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn class_of(classes: &[ClassifiedError], q: usize) -> ErrorClass {
        classes[q].class
    }

    #[test]
    fn commutation_examples() {
        assert!(pauli_commutes(&p("XX"), &p("ZZ")).unwrap());
        assert!(!pauli_commutes(&p("X"), &p("Z")).unwrap());
        assert!(pauli_commutes(&p("XYZ"), &p("III")).unwrap());
    }

    #[test]
    fn base_generators_are_x_chain() {
        let g = stabiliser_generators(&base_code(3).unwrap()).unwrap();
        let words: Vec<String> = g.generators.iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["+XXI", "+IXX"]);
    }

    #[test]
    fn base_chain_generates_full_group() {
        for n in 2..=6 {
            let code = base_code(n).unwrap();
            let gens = stabiliser_generators(&code).unwrap();
            let group = stabiliser_group(&code).unwrap();
            assert_eq!(group.len(), 1 << (n - 1));
            for s in &group {
                assert!(gens.contains(s).unwrap());
                assert_eq!(s.count(Letter::Z) + s.count(Letter::Y), 0);
            }
        }
    }

    #[test]
    fn base_code_classes() {
        let code = base_code(4).unwrap();
        let z = classify_errors(&code, &single_qubit_errors(4, Letter::Z).unwrap()).unwrap();
        assert!(z.iter().all(|c| c.class == ErrorClass::Correctable));
        let x = classify_errors(&code, &single_qubit_errors(4, Letter::X).unwrap()).unwrap();
        assert!(x.iter().all(|c| c.class == ErrorClass::Undetectable));
        let id = classify_errors(&code, &[PauliString::identity(4).unwrap()]).unwrap();
        assert_eq!(id[0].class, ErrorClass::Trivial);
        assert!(id[0].syndrome.is_zero());
    }

    #[test]
    fn one_and_two_phase_codes() {
        let one = code(CodeFamily::OnePhase, 5).unwrap();
        let z = classify_errors(&one, &single_qubit_errors(5, Letter::Z).unwrap()).unwrap();
        assert_eq!(class_of(&z, 4), ErrorClass::Undetectable);
        let two = code(CodeFamily::TwoPhase, 5).unwrap();
        let z = classify_errors(&two, &single_qubit_errors(5, Letter::Z).unwrap()).unwrap();
        assert_eq!(class_of(&z, 3), ErrorClass::Detectable);
        assert_eq!(class_of(&z, 4), ErrorClass::Detectable);
        assert_eq!(z[3].syndrome, z[4].syndrome);
    }

    #[test]
    fn three_phase_codes() {
        let c6 = three_phase_code(6).unwrap();
        let g6 = stabiliser_generators(&c6).unwrap();
        assert!(g6.generators.contains(&p("ZZZZZZ")));
        let z = classify_errors_with(&c6, &g6, &single_qubit_errors(6, Letter::Z).unwrap()).unwrap();
        assert!(z.iter().all(|c| c.class == ErrorClass::Correctable));
        let x = classify_errors_with(&c6, &g6, &single_qubit_errors(6, Letter::X).unwrap()).unwrap();
        assert!(x.iter().all(|c| c.class == ErrorClass::Detectable));
        assert!(x.iter().all(|c| c.syndrome == x[0].syndrome));

        let c5 = three_phase_code(5).unwrap();
        let z = classify_errors(&c5, &single_qubit_errors(5, Letter::Z).unwrap()).unwrap();
        assert_eq!(z[0].syndrome, z[1].syndrome);
        assert_eq!(class_of(&z, 0), ErrorClass::Detectable);
        assert!(three_phase_code(3).is_err());
    }

    #[test]
    fn generator_counts() {
        for family in [CodeFamily::OnePhase, CodeFamily::TwoPhase, CodeFamily::ThreePhase] {
            for n in 4..=6 {
                let g = stabiliser_generators(&code(family, n).unwrap()).unwrap();
                assert_eq!(g.len(), n - 1, "{family} {n}");
            }
        }
    }

    #[test]
    fn logical_operators() {
        let base = base_code(4).unwrap();
        match logical_ops(&base).unwrap().x {
            LogicalOp::Pauli(x) => assert!(swaps_codewords(&base, &x).unwrap()),
            other => panic!("{other:?}"),
        }
        assert!(swaps_codewords(&base, &PauliString::single(4, 1, Letter::X).unwrap()).unwrap());
        let c6 = three_phase_code(6).unwrap();
        let ops = logical_ops(&c6).unwrap();
        assert_eq!(ops.x, LogicalOp::Pauli(p("IIIZZZ")));
        assert!(swaps_codewords(&c6, &p("IIIZZZ")).unwrap());
        assert_eq!(ops.z, LogicalOp::Unknown);
        let custom = CodeSpec::custom("c", StateVector::from_bits("0").unwrap(), StateVector::from_bits("1").unwrap()).unwrap();
        assert!(logical_ops(&custom).is_err());
    }

    #[test]
    fn phase_codes_admit_weight_two_z_bar() {
        for (family, n) in [(CodeFamily::OnePhase, 4), (CodeFamily::TwoPhase, 5), (CodeFamily::ThreePhase, 6)] {
            let c = code(family, n).unwrap();
            let g = stabiliser_generators(&c).unwrap();
            let zbar = PauliString::on_qubits(n, &[0, n - 1], Letter::X).unwrap();
            assert!(syndrome(&zbar, &g).unwrap().is_zero());
            assert!(zbar.apply(&c.codeword_zero).unwrap().approx_eq(&c.codeword_zero, 1e-12));
            let flipped = c.codeword_one.with_global_phase(Complex64::new(-1.0, 0.0));
            assert!(zbar.apply(&c.codeword_one).unwrap().approx_eq(&flipped, 1e-12));
        }
    }

    #[test]
    fn five_qubit_check_passes() {
        let r = five_qubit_code_check().unwrap();
        assert!(r.passes(), "{r:?}");
        let zero = five_qubit_code().codeword_zero;
        assert!((zero.amplitude(0b11011).re + 0.25).abs() < 1e-15);
    }

    #[test]
    fn kl_agrees_on_small_examples() {
        let code = base_code(4).unwrap();
        let mut errs = vec![PauliString::identity(4).unwrap()];
        errs.extend(single_qubit_errors(4, Letter::Z).unwrap());
        assert!(knill_laflamme(&code, &errs).unwrap());
        errs.push(PauliString::single(4, 0, Letter::X).unwrap());
        assert!(!knill_laflamme(&code, &errs).unwrap());
    }

    #[test]
    fn degenerate_pairs_stay_correctable() {
        let c5 = three_phase_code(5).unwrap();
        let errs = [PauliString::identity(5).unwrap(), p("XIIII"), p("IXIII")];
        let classes = classify_errors(&c5, &errs).unwrap();
        assert_eq!(classes[1].syndrome, classes[2].syndrome);
        assert!(all_correctable(&classes));
        assert!(knill_laflamme(&c5, &errs).unwrap());
    }

    #[test]
    fn search_size_cap() {
        let big = base_code(9).unwrap();
        assert!(stabiliser_group(&big).is_err());
    }
}
