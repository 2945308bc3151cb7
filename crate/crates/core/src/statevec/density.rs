use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{StateVector, ZERO};
use crate::bits::qubit_mask;
use crate::error::{Error, Result};
use crate::tolerance::{DEFAULT_NORM, EIGEN_FLOOR};

/// Practical ceiling for dense density matrices.
pub const MAX_DENSITY_QUBITS: usize = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity to 1e-12.
    pub fn new(num_qubits: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::TooFewQubits { n: 0, min: 1 });
        }
        if num_qubits > MAX_DENSITY_QUBITS {
            return Err(Error::UnsupportedSize {
                what: "dense density matrix",
                n: num_qubits,
                max: MAX_DENSITY_QUBITS,
            });
        }
        let dim = 1 << num_qubits;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: matrix.nrows() });
        }
        let herm = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| (matrix[(i, j)] - matrix[(j, i)].conj()).norm())
            .fold(0.0, f64::max);
        if herm > DEFAULT_NORM {
            return Err(Error::InvalidDensityMatrix("not Hermitian"));
        }
        if (matrix.trace() - 1.0).norm() > DEFAULT_NORM {
            return Err(Error::InvalidDensityMatrix("trace is not one"));
        }
        let rho = Self { num_qubits, matrix };
        if rho.eigenvalues().iter().any(|&l| l < -DEFAULT_NORM) {
            return Err(Error::InvalidDensityMatrix("negative eigenvalue"));
        }
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|`
    pub fn from_pure(state: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Self { num_qubits: state.num_qubits(), matrix: &v * v.adjoint() }
    }

    /// Weighted mixture of pure states; weights must sum to one.
    pub fn mixture(terms: &[(f64, &StateVector)]) -> Result<Self> {
        let first = terms.first().ok_or(Error::InvalidDensityMatrix("empty mixture"))?;
        let n = first.1.num_qubits();
        let dim = 1 << n;
        let mut m = DMatrix::from_element(dim, dim, ZERO);
        for (w, s) in terms {
            if s.num_qubits() != n {
                return Err(Error::DimensionMismatch { expected: n, found: s.num_qubits() });
            }
            m += DensityMatrix::from_pure(s).matrix * Complex64::new(*w, 0.0);
        }
        Self::new(n, m)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|x| x.norm_sqr()).sum()
    }

    /// `⟨ψ|ρ|ψ⟩`
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, found: state.num_qubits() });
        }
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Ok((v.adjoint() * &self.matrix * &v)[(0, 0)].re)
    }

    pub fn max_deviation(&self, other: &DensityMatrix) -> f64 {
        if self.num_qubits != other.num_qubits {
            return f64::INFINITY;
        }
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Offsets of every local index of `qubits` inside an `n`-qubit index.
pub(crate) fn scatter_offsets(n: usize, qubits: &[usize]) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|local| {
            qubits
                .iter()
                .enumerate()
                .filter(|(j, _)| local & (1 << (k - 1 - j)) != 0)
                .map(|(_, &q)| qubit_mask(n, q))
                .sum()
        })
        .collect()
}

/// Sorted kept set and its complement, validated against `n`.
fn split_qubits(n: usize, keep: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    for w in kept.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateTarget(w[0]));
        }
    }
    if let Some(&q) = kept.last().filter(|&&q| q >= n) {
        return Err(Error::QubitOutOfRange { qubit: q, n });
    }
    let traced = (0..n).filter(|q| !kept.contains(q)).collect();
    Ok((kept, traced))
}

/// Reduced state on `keep` (qubits kept in ascending order).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.num_qubits;
    let (kept, traced) = split_qubits(n, keep)?;
    let k_off = scatter_offsets(n, &kept);
    let t_off = scatter_offsets(n, &traced);
    let dim = k_off.len();
    let m = DMatrix::from_fn(dim, dim, |i, j| {
        t_off
            .iter()
            .map(|t| rho.matrix[(k_off[i] | t, k_off[j] | t)])
            .sum()
    });
    Ok(DensityMatrix { num_qubits: kept.len(), matrix: m })
}

/// Reduced state of a pure state, without forming the full `|ψ⟩⟨ψ|`.
pub fn reduced_density_matrix(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let n = state.num_qubits();
    let (kept, traced) = split_qubits(n, keep)?;
    if kept.len() > MAX_DENSITY_QUBITS {
        return Err(Error::UnsupportedSize {
            what: "dense density matrix",
            n: kept.len(),
            max: MAX_DENSITY_QUBITS,
        });
    }
    let k_off = scatter_offsets(n, &kept);
    let t_off = scatter_offsets(n, &traced);
    let amps = state.amplitudes();
    // M[i][t] = ψ(i, t); ρ = M M†
    let mat = DMatrix::from_fn(k_off.len(), t_off.len(), |i, t| amps[k_off[i] | t_off[t]]);
    Ok(DensityMatrix { num_qubits: kept.len(), matrix: &mat * mat.adjoint() })
}

/// `-Σ λ log₂ λ` in bits; eigenvalues below 1e-12 count as zero.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .filter(|&l| l > EIGEN_FLOOR)
        .map(|l| -l * l.log2())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::tensor;

    fn bell() -> StateVector {
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        StateVector::from_amplitudes(2, vec![a, ZERO, ZERO, a]).unwrap()
    }

    #[test]
    fn bell_reduces_to_maximally_mixed() {
        let rho = partial_trace(&DensityMatrix::from_pure(&bell()), &[0]).unwrap();
        let half = DMatrix::from_diagonal_element(2, 2, Complex64::new(0.5, 0.0));
        assert!(rho.matrix().iter().zip(half.iter()).all(|(a, b)| (a - b).norm() < 1e-15));
        assert!((von_neumann_entropy(&rho) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_reduces_to_pure() {
        let s = tensor(&StateVector::from_bits("1").unwrap(), &bell());
        let rho = partial_trace(&DensityMatrix::from_pure(&s), &[0]).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-14);
        assert!(von_neumann_entropy(&rho).abs() < 1e-12);
    }

    #[test]
    fn pure_and_full_routes_agree() {
        let s = tensor(&bell(), &StateVector::w(3).unwrap());
        for keep in [vec![0], vec![1, 3], vec![4, 0, 2]] {
            let a = partial_trace(&DensityMatrix::from_pure(&s), &keep).unwrap();
            let b = reduced_density_matrix(&s, &keep).unwrap();
            assert!(a.max_deviation(&b) < 1e-14);
        }
    }

    #[test]
    fn keep_set_errors() {
        let rho = DensityMatrix::from_pure(&bell());
        assert_eq!(partial_trace(&rho, &[]), Err(Error::EmptyKeepSet));
        assert!(matches!(partial_trace(&rho, &[2]), Err(Error::QubitOutOfRange { .. })));
        assert!(matches!(partial_trace(&rho, &[1, 1]), Err(Error::DuplicateTarget(1))));
    }

    #[test]
    fn validation_rejects_non_states() {
        let m = DMatrix::from_diagonal_element(2, 2, Complex64::new(1.0, 0.0));
        assert!(DensityMatrix::new(1, m).is_err());
        let mut m = DMatrix::from_element(2, 2, ZERO);
        m[(0, 0)] = Complex64::new(1.5, 0.0);
        m[(1, 1)] = Complex64::new(-0.5, 0.0);
        assert_eq!(DensityMatrix::new(1, m), Err(Error::InvalidDensityMatrix("negative eigenvalue")));
    }
}
