use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::pow2_half;
use crate::error::{Error, Result};
use crate::statevec::{
    apply_gate, partial_trace, reduced_density_matrix, scatter_offsets, von_neumann_entropy,
    DensityMatrix, GateOp, StateVector, ZERO,
};
use crate::tolerance::{DEFAULT_CMP, EIGEN_FLOOR};

/// Exhaustive persistency search is capped here.
pub const MAX_PERSISTENCY_QUBITS: usize = 8;

const RANK_CUTOFF: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    /// Cut sizes `(m, n - m)`.
    pub cut: (usize, usize),
    /// Positive, descending.
    pub coefficients: Vec<f64>,
    pub left_factors: Vec<StateVector>,
    pub right_factors: Vec<StateVector>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Entanglement entropy of the cut, in bits.
    pub fn entropy(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c * c)
            .filter(|&p| p > EIGEN_FLOOR)
            .map(|p| -p * p.log2())
            .sum()
    }

    /// `Σ_k c_k |l_k⟩|r_k⟩`
    pub fn reconstruct(&self) -> StateVector {
        let (m, rest) = self.cut;
        let mut amps = vec![ZERO; 1 << (m + rest)];
        for ((c, l), r) in self.coefficients.iter().zip(&self.left_factors).zip(&self.right_factors) {
            for (i, a) in l.amplitudes().iter().enumerate() {
                for (j, b) in r.amplitudes().iter().enumerate() {
                    amps[(i << rest) | j] += a * b * *c;
                }
            }
        }
        StateVector::from_raw(m + rest, amps)
    }
}

fn amplitude_matrix(state: &StateVector, m: usize) -> Result<DMatrix<Complex64>> {
    let n = state.num_qubits();
    if m == 0 || m >= n {
        return Err(Error::InvalidCut { m, n });
    }
    let cols = 1usize << (n - m);
    let amps = state.amplitudes();
    Ok(DMatrix::from_fn(1 << m, cols, |i, j| amps[i * cols + j]))
}

/// Schmidt decomposition across qubits `[0, m)` | `[m, n)`.
///
/// Left factors within a degenerate block of coefficients are put in a
/// canonical basis (reduced row echelon form, then Gram–Schmidt), and every
/// left factor has its first nonzero amplitude real and positive.
pub fn schmidt_decompose(state: &StateVector, m: usize) -> Result<SchmidtDecomposition> {
    let mat = amplitude_matrix(state, m)?;
    let n = state.num_qubits();
    let svd = mat.clone().svd(true, false);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > RANK_CUTOFF)
        .collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let mut coefficients = Vec::with_capacity(order.len());
    let mut left = Vec::with_capacity(order.len());
    let mut start = 0;
    while start < order.len() {
        let lead = svd.singular_values[order[start]];
        let mut end = start + 1;
        while end < order.len() && (lead - svd.singular_values[order[end]]).abs() <= 1e-9 {
            end += 1;
        }
        let block: Vec<Vec<Complex64>> = order[start..end]
            .iter()
            .map(|&k| u.column(k).iter().copied().collect())
            .collect();
        for v in canonical_basis(block) {
            left.push(v);
        }
        for &k in &order[start..end] {
            coefficients.push(svd.singular_values[k]);
        }
        start = end;
    }

    let mut left_factors = Vec::with_capacity(left.len());
    let mut right_factors = Vec::with_capacity(left.len());
    for (v, &c) in left.into_iter().zip(&coefficients) {
        let right: Vec<Complex64> = (0..mat.ncols())
            .map(|j| (0..mat.nrows()).map(|i| v[i].conj() * mat[(i, j)]).sum::<Complex64>() / c)
            .collect();
        left_factors.push(StateVector::normalized(m, v)?);
        right_factors.push(StateVector::normalized(n - m, right)?);
    }
    Ok(SchmidtDecomposition { cut: (m, n - m), coefficients, left_factors, right_factors })
}

/// Orthonormal basis of `span(rows)` that depends only on the span.
fn canonical_basis(mut rows: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let k = rows.len();
    let dim = rows.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for col in 0..dim {
        if pivot_row == k {
            break;
        }
        let best = (pivot_row..k)
            .max_by(|&a, &b| rows[a][col].norm().total_cmp(&rows[b][col].norm()))
            .unwrap();
        if rows[best][col].norm() <= 1e-9 {
            continue;
        }
        rows.swap(pivot_row, best);
        let p = rows[pivot_row][col];
        rows[pivot_row].iter_mut().for_each(|x| *x /= p);
        for r in 0..k {
            if r != pivot_row {
                let f = rows[r][col];
                if f != ZERO {
                    for c in 0..dim {
                        let sub = f * rows[pivot_row][c];
                        rows[r][c] -= sub;
                    }
                }
            }
        }
        pivot_row += 1;
    }

    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    for mut v in rows {
        for u in &out {
            let ip: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= ip * y);
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        if let Some(first) = v.iter().find(|x| x.norm() > 1e-9).copied() {
            let fix = first.conj() / first.norm();
            v.iter_mut().for_each(|x| *x *= fix);
        }
        out.push(v);
    }
    out
}

/// Entropy (bits) of either side of the cut `[0, m) | [m, n)`.
pub fn bipartition_entropy(state: &StateVector, m: usize) -> Result<f64> {
    let mat = amplitude_matrix(state, m)?;
    Ok(mat
        .singular_values()
        .iter()
        .map(|s| s * s)
        .filter(|&p| p > EIGEN_FLOOR)
        .map(|p| -p * p.log2())
        .sum())
}

pub fn check_maximally_connected(state: &StateVector) -> Result<bool> {
    check_maximally_connected_tol(state, DEFAULT_CMP)
}

/// For every qubit pair and every possible computational outcome on the
/// remaining qubits, the pair is left in one of the four Bell states.
pub fn check_maximally_connected_tol(state: &StateVector, tol: f64) -> Result<bool> {
    let n = state.num_qubits();
    if n < 3 {
        return Err(Error::TooFewQubits { n, min: 3 });
    }
    let amps = state.amplitudes();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        for j in i + 1..n {
            let pair = scatter_offsets(n, &[i, j]);
            let rest: Vec<usize> = (0..n).filter(|&q| q != i && q != j).collect();
            for r in scatter_offsets(n, &rest) {
                let v: Vec<Complex64> = pair.iter().map(|&p| amps[p | r]).collect();
                let p: f64 = v.iter().map(|a| a.norm_sqr()).sum();
                if p <= EIGEN_FLOOR {
                    continue;
                }
                let norm = p.sqrt();
                let overlap = [
                    (v[0] + v[3]).norm(),
                    (v[0] - v[3]).norm(),
                    (v[1] + v[2]).norm(),
                    (v[1] - v[2]).norm(),
                ]
                .into_iter()
                .fold(0.0, f64::max)
                    * h
                    / norm;
                if overlap < 1.0 - tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `√2 / 2^{n/2+1} · Tr(M^{s_0} ⋯ M^{s_{n-1}})` with `M^0 = 𝟙`, `M^1 = X`.
///
/// The trace is 2 when the string has an even number of ones and 0
/// otherwise. For even `n` swapping the two matrices gives the same trace.
pub fn mps_amplitude(n: usize, index: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::TooFewQubits { n, min: 1 });
    }
    if n >= usize::BITS as usize || index >= 1 << n {
        return Err(Error::DimensionMismatch { expected: n, found: index });
    }
    let x = [[0.0, 1.0], [1.0, 0.0]];
    let id = [[1.0, 0.0], [0.0, 1.0]];
    let mut acc = id;
    for q in 0..n {
        let m = if crate::bits::qubit_value(n, index, q) == 1 { &x } else { &id };
        acc = [
            [
                acc[0][0] * m[0][0] + acc[0][1] * m[1][0],
                acc[0][0] * m[0][1] + acc[0][1] * m[1][1],
            ],
            [
                acc[1][0] * m[0][0] + acc[1][1] * m[1][0],
                acc[1][0] * m[0][1] + acc[1][1] * m[1][1],
            ],
        ];
    }
    let trace = acc[0][0] + acc[1][1];
    Ok(std::f64::consts::SQRT_2 / (pow2_half(n) * 2.0) * trace)
}

/// Trace out qubit 0, then evaluate [`q_information_of`] on the remainder.
pub fn q_information(state: &StateVector) -> Result<f64> {
    let n = state.num_qubits();
    if n < 3 {
        return Err(Error::TooFewQubits { n, min: 3 });
    }
    let keep: Vec<usize> = (1..n).collect();
    q_information_of(&reduced_density_matrix(state, &keep)?)
}

/// `Ω = (n-2) S(ρ) + Σ_i [S(ρ_i) - S(Tr_i ρ)]`, where `ρ_i` is the marginal
/// of qubit `i` and `Tr_i ρ` traces out qubit `i` alone.
pub fn q_information_of(rho: &DensityMatrix) -> Result<f64> {
    let n = rho.num_qubits();
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    let mut omega = (n as f64 - 2.0) * von_neumann_entropy(rho);
    for i in 0..n {
        let single = partial_trace(rho, &[i])?;
        let others: Vec<usize> = (0..n).filter(|&q| q != i).collect();
        let without = partial_trace(rho, &others)?;
        omega += von_neumann_entropy(&single) - von_neumann_entropy(&without);
    }
    Ok(omega)
}

/// Every single-qubit marginal is pure (purity at least `1 - tol`).
pub fn is_fully_product(state: &StateVector, tol: f64) -> bool {
    let n = state.num_qubits();
    let amps = state.amplitudes();
    (0..n).all(|q| {
        let mask = crate::bits::qubit_mask(n, q);
        let (mut r00, mut r11, mut r01) = (0.0, 0.0, ZERO);
        for (idx, a) in amps.iter().enumerate().filter(|(idx, _)| idx & mask == 0) {
            let b = amps[idx | mask];
            r00 += a.norm_sqr();
            r11 += b.norm_sqr();
            r01 += a * b.conj();
        }
        let total = r00 + r11;
        let purity = (r00 * r00 + r11 * r11 + 2.0 * r01.norm_sqr()) / (total * total);
        purity >= 1.0 - tol
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurementBasis {
    Computational,
    /// `X` eigenbasis, i.e. `H` on every qubit before a computational readout.
    Hadamard,
}

pub fn persistency_computational(state: &StateVector) -> Result<usize> {
    persistency(state, MeasurementBasis::Computational)
}

/// Smallest `k` such that measuring some `k` qubits (all in `basis`) leaves a
/// fully product state for every outcome of nonzero probability.
pub fn persistency(state: &StateVector, basis: MeasurementBasis) -> Result<usize> {
    let n = state.num_qubits();
    if n > MAX_PERSISTENCY_QUBITS {
        return Err(Error::UnsupportedSize { what: "persistency search", n, max: MAX_PERSISTENCY_QUBITS });
    }
    let mut s = state.clone();
    if basis == MeasurementBasis::Hadamard {
        for q in 0..n {
            s = apply_gate(&s, &GateOp::h(q))?;
        }
    }
    let amps = s.amplitudes();
    let full = (1usize << n) - 1;
    for k in 0..=n {
        for measured in (0..1usize << n).filter(|m| m.count_ones() as usize == k) {
            let meas_q: Vec<usize> = (0..n).filter(|&q| measured & crate::bits::qubit_mask(n, q) != 0).collect();
            let rest_q: Vec<usize> = (0..n).filter(|&q| measured & crate::bits::qubit_mask(n, q) == 0).collect();
            if rest_q.is_empty() {
                return Ok(k);
            }
            let rest_off = scatter_offsets(n, &rest_q);
            let ok = scatter_offsets(n, &meas_q).into_iter().all(|outcome| {
                debug_assert_eq!(outcome & !measured & full, 0);
                let v: Vec<Complex64> = rest_off.iter().map(|&r| amps[r | outcome]).collect();
                let p: f64 = v.iter().map(|a| a.norm_sqr()).sum();
                p <= EIGEN_FLOOR || is_fully_product(&StateVector::from_raw(rest_q.len(), v), 1e-9)
            });
            if ok {
                return Ok(k);
            }
        }
    }
    Ok(n)
}
