//! Dense state-vector and density-matrix kernel.
//!
//! Every state in the crate is a [`StateVector`]: `2^n` complex amplitudes in
//! big-endian qubit order (qubit 0 is the most significant bit of the index).
//! Values are immutable once built; operations return new values.

mod density;
mod gate;

pub(crate) use density::scatter_offsets;
pub use density::{partial_trace, reduced_density_matrix, von_neumann_entropy, DensityMatrix};
pub use gate::{apply_circuit, apply_gate, inverse_circuit, GateKind, GateOp};

use num_complex::Complex64;

use crate::bits;
use crate::error::{Error, Result};
use crate::tolerance::DEFAULT_NORM;

/// Practical ceiling for dense state vectors.
pub const MAX_STATE_QUBITS: usize = 20;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Build a state from raw amplitudes, checking length and unit norm.
    pub fn from_amplitudes(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubits(num_qubits)?;
        if amplitudes.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << num_qubits,
                found: amplitudes.len(),
            });
        }
        let norm = l2_norm(&amplitudes);
        if (norm - 1.0).abs() > DEFAULT_NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { num_qubits, amplitudes })
    }

    /// Build a state from arbitrary nonzero amplitudes, rescaling to unit norm.
    pub fn normalized(num_qubits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubits(num_qubits)?;
        if amplitudes.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << num_qubits,
                found: amplitudes.len(),
            });
        }
        let norm = l2_norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { num_qubits, amplitudes })
    }

    pub(crate) fn from_raw(num_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << num_qubits);
        Self { num_qubits, amplitudes }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1 << num_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self::from_raw(num_qubits, amps))
    }

    /// `|0…0⟩`
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    /// Parse a ket label such as `"0110"`.
    pub fn from_bits(bits_str: &str) -> Result<Self> {
        let index = bits::parse_bit_string(bits_str)?;
        Self::basis(bits_str.len(), index)
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`
    pub fn ghz(num_qubits: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1 << num_qubits;
        let mut amps = vec![ZERO; dim];
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[0] = a;
        amps[dim - 1] = a;
        Ok(Self::from_raw(num_qubits, amps))
    }

    /// Equal superposition of all weight-one strings.
    pub fn w(num_qubits: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1 << num_qubits;
        let mut amps = vec![ZERO; dim];
        let a = Complex64::new(1.0 / (num_qubits as f64).sqrt(), 0.0);
        for q in 0..num_qubits {
            amps[bits::qubit_mask(num_qubits, q)] = a;
        }
        Ok(Self::from_raw(num_qubits, amps))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    /// Multiply by a scalar of modulus one.
    pub fn with_global_phase(&self, phase: Complex64) -> Self {
        Self::from_raw(
            self.num_qubits,
            self.amplitudes.iter().map(|a| a * phase).collect(),
        )
    }

    /// Largest elementwise deviation from `other`.
    pub fn max_deviation(&self, other: &StateVector) -> Result<f64> {
        same_size(self, other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Elementwise equality within `tol`.
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.max_deviation(other).map(|d| d <= tol).unwrap_or(false)
    }

    /// Equality up to a global phase: `|⟨self|other⟩| = 1` within `tol`.
    pub fn same_ray(&self, other: &StateVector, tol: f64) -> bool {
        inner_product(self, other)
            .map(|ip| (ip.norm() - 1.0).abs() <= tol)
            .unwrap_or(false)
    }

    /// Indices with nonzero amplitude (modulus above `tol`).
    pub fn support(&self, tol: f64) -> Vec<usize> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > tol)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Probability table over `n`-bit strings.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementDistribution {
    num_bits: usize,
    probabilities: Vec<f64>,
}

impl MeasurementDistribution {
    pub fn new(num_bits: usize, probabilities: Vec<f64>) -> Result<Self> {
        if num_bits == 0 || probabilities.len() != 1 << num_bits {
            return Err(Error::DimensionMismatch {
                expected: 1 << num_bits,
                found: probabilities.len(),
            });
        }
        if probabilities.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidDistribution("entries must be finite and non-negative"));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > DEFAULT_NORM {
            return Err(Error::InvalidDistribution("entries must sum to one"));
        }
        Ok(Self { num_bits, probabilities })
    }

    pub(crate) fn from_raw(num_bits: usize, probabilities: Vec<f64>) -> Self {
        Self { num_bits, probabilities }
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.probabilities[index]
    }

    pub fn total_variation(&self, other: &MeasurementDistribution) -> Result<f64> {
        if self.num_bits != other.num_bits {
            return Err(Error::DimensionMismatch {
                expected: self.num_bits,
                found: other.num_bits,
            });
        }
        Ok(0.5
            * self
                .probabilities
                .iter()
                .zip(&other.probabilities)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>())
    }
}

/// Computational-basis statistics `|α_s|²`.
pub fn measurement_distribution(state: &StateVector) -> MeasurementDistribution {
    MeasurementDistribution::from_raw(
        state.num_qubits,
        state.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
    )
}

/// `⟨a|b⟩`
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    same_size(a, b)?;
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// `a ⊗ b`, with `a` on the leading (most significant) qubits.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    let amps = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    StateVector::from_raw(a.num_qubits + b.num_qubits, amps)
}

/// Gram matrix `G[i][j] = ⟨s_i|s_j⟩` and its largest deviation from identity.
pub fn gram_deviation(states: &[StateVector]) -> Result<(Vec<Vec<Complex64>>, f64)> {
    let mut gram = vec![vec![ZERO; states.len()]; states.len()];
    let mut dev = 0.0f64;
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate().skip(i) {
            let ip = inner_product(a, b)?;
            let target = if i == j { ONE } else { ZERO };
            dev = dev.max((ip - target).norm());
            gram[i][j] = ip;
            gram[j][i] = ip.conj();
        }
    }
    Ok((gram, dev))
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::TooFewQubits { n, min: 1 });
    }
    if n > MAX_STATE_QUBITS {
        return Err(Error::UnsupportedSize { what: "dense state vector", n, max: MAX_STATE_QUBITS });
    }
    Ok(())
}

fn same_size(a: &StateVector, b: &StateVector) -> Result<()> {
    if a.num_qubits != b.num_qubits {
        return Err(Error::DimensionMismatch { expected: a.num_qubits, found: b.num_qubits });
    }
    Ok(())
}

fn l2_norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_unnormalized_and_wrong_length() {
        assert!(matches!(
            StateVector::from_amplitudes(1, vec![c(1.0), c(1.0)]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            StateVector::from_amplitudes(2, vec![c(1.0), c(0.0)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(StateVector::zero(0).is_err());
    }

    #[test]
    fn tensor_orders_big_endian() {
        let s = tensor(&StateVector::from_bits("0").unwrap(), &StateVector::from_bits("1").unwrap());
        assert_eq!(s, StateVector::from_bits("01").unwrap());
    }

    #[test]
    fn tensor_of_plus_states_is_uniform() {
        let plus = StateVector::normalized(1, vec![c(1.0), c(1.0)]).unwrap();
        let s = tensor(&plus, &plus);
        for a in s.amplitudes() {
            assert!((a - c(0.5)).norm() < 1e-15);
        }
    }

    #[test]
    fn basis_state_measures_as_point_mass() {
        let d = measurement_distribution(&StateVector::from_bits("101").unwrap());
        assert_eq!(d.probability(0b101), 1.0);
        assert_eq!(d.probabilities().iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn inner_product_checks_dimensions() {
        let a = StateVector::zero(2).unwrap();
        let b = StateVector::zero(3).unwrap();
        assert!(inner_product(&a, &b).is_err());
        assert_eq!(inner_product(&a, &a).unwrap(), ONE);
    }

    #[test]
    fn w_and_ghz_are_normalized() {
        for n in 1..8 {
            assert!((StateVector::w(n).unwrap().norm() - 1.0).abs() < 1e-14);
            assert!((StateVector::ghz(n).unwrap().norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn distribution_validation() {
        assert!(MeasurementDistribution::new(1, vec![0.5, 0.5]).is_ok());
        assert!(MeasurementDistribution::new(1, vec![0.7, 0.5]).is_err());
        assert!(MeasurementDistribution::new(1, vec![1.5, -0.5]).is_err());
    }
}
