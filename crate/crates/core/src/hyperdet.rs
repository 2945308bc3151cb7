//! Multilinear form of an amplitude tensor, its partial derivatives, and
//! vanishing witnesses.
//!
//! For a tensor `T` on `n` qubits and vectors `x^(1), …, x^(n)` in `ℂ²`,
//! `f = Σ T_{i_1…i_n} x^(1)_{i_1} ⋯ x^(n)_{i_n}`. A nontrivial common zero of
//! `f` and all `2n` partials certifies a vanishing hyperdeterminant.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ncoupled::SerComplex;
use crate::statevec::{StateVector, ONE, ZERO};

/// Absolute tolerance on `|f|` and on every partial.
pub const VANISHING_TOL: f64 = 1e-10;
pub const MAX_SEARCH_QUBITS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearWitness {
    vectors: Vec<[Complex64; 2]>,
}

impl MultilinearWitness {
    /// Fails if any vector is exactly zero.
    pub fn new(vectors: Vec<[Complex64; 2]>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::TooFewQubits { n: 0, min: 1 });
        }
        if let Some(i) = vectors.iter().position(|v| v[0] == ZERO && v[1] == ZERO) {
            return Err(Error::TrivialWitness(i));
        }
        Ok(Self { vectors })
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[[Complex64; 2]] {
        &self.vectors
    }

    fn normalized(&self) -> Self {
        let vectors = self
            .vectors
            .iter()
            .map(|v| {
                let r = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
                [v[0] / r, v[1] / r]
            })
            .collect();
        Self { vectors }
    }
}

impl Serialize for MultilinearWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<[[f64; 2]; 2]> = self
            .vectors
            .iter()
            .map(|v| [[v[0].re, v[0].im], [v[1].re, v[1].im]])
            .collect();
        rows.serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub f_value: SerComplex,
    /// Largest `|∂f/∂x^(k)_s|` over all `2n` partials.
    pub max_partial: f64,
    pub vanishes: bool,
}

fn check_dims(state: &StateVector, w: &MultilinearWitness) -> Result<()> {
    if state.num_qubits() != w.n() {
        return Err(Error::DimensionMismatch { expected: state.num_qubits(), found: w.n() });
    }
    Ok(())
}

/// Contract every vector except the one on qubit `keep`.
fn contract_except(amps: &[Complex64], x: &[[Complex64; 2]], keep: usize) -> [Complex64; 2] {
    let n = x.len();
    // leading qubits: fold the most significant bit away each step
    let mut t = amps.to_vec();
    for xq in &x[..keep] {
        let half = t.len() / 2;
        t = (0..half).map(|j| xq[0] * t[j] + xq[1] * t[half + j]).collect();
    }
    // trailing qubits: fold the least significant bit away each step
    for xq in x[keep + 1..n].iter().rev() {
        t = t.chunks_exact(2).map(|p| xq[0] * p[0] + xq[1] * p[1]).collect();
    }
    [t[0], t[1]]
}

/// Contract every vector except those on qubits `a < b`; result indexed `[i_a][i_b]`.
fn contract_except_two(amps: &[Complex64], x: &[[Complex64; 2]], a: usize, b: usize) -> [[Complex64; 2]; 2] {
    let n = x.len();
    let mut out = [[ZERO; 2]; 2];
    for (idx, t) in amps.iter().enumerate() {
        if *t == ZERO {
            continue;
        }
        let mut w = *t;
        for (q, xq) in x.iter().enumerate() {
            if q != a && q != b {
                w *= xq[(idx >> (n - 1 - q)) & 1];
            }
        }
        out[(idx >> (n - 1 - a)) & 1][(idx >> (n - 1 - b)) & 1] += w;
    }
    out
}

/// `f(x^(1), …, x^(n))`
pub fn multilinear_form(state: &StateVector, w: &MultilinearWitness) -> Result<Complex64> {
    check_dims(state, w)?;
    let g = contract_except(state.amplitudes(), &w.vectors, 0);
    Ok(w.vectors[0][0] * g[0] + w.vectors[0][1] * g[1])
}

/// `∂f/∂x^(k)_s` at entry `2k + s`.
pub fn partials(state: &StateVector, w: &MultilinearWitness) -> Result<Vec<Complex64>> {
    check_dims(state, w)?;
    Ok((0..w.n())
        .flat_map(|k| contract_except(state.amplitudes(), &w.vectors, k))
        .collect())
}

pub fn evaluate_witness(state: &StateVector, w: &MultilinearWitness) -> Result<WitnessReport> {
    evaluate_witness_tol(state, w, VANISHING_TOL)
}

pub fn evaluate_witness_tol(state: &StateVector, w: &MultilinearWitness, tol: f64) -> Result<WitnessReport> {
    let f = multilinear_form(state, w)?;
    let max_partial = partials(state, w)?.iter().map(|p| p.norm()).fold(0.0, f64::max);
    Ok(WitnessReport {
        f_value: SerComplex(f),
        max_partial,
        vanishes: f.norm() < tol && max_partial < tol,
    })
}

const E0: [Complex64; 2] = [ONE, ZERO];
const E1: [Complex64; 2] = [ZERO, ONE];
const FREE: [Complex64; 2] = [ONE, ONE];

/// `x^(1)_0 = x^(2)_0 = x^(3)_0 = 0`, every other entry 1.
pub fn w_state_witness(n: usize) -> Result<MultilinearWitness> {
    if n < 3 {
        return Err(Error::TooFewQubits { n, min: 3 });
    }
    let mut v = vec![FREE; n];
    v[..3].fill(E1);
    MultilinearWitness::new(v)
}

/// `x^(1)_0 = x^(2)_0 = x^(3)_1 = x^(4)_1 = 0`, every other entry 1.
pub fn ghz_state_witness(n: usize) -> Result<MultilinearWitness> {
    if n < 4 {
        return Err(Error::TooFewQubits { n, min: 4 });
    }
    let mut v = vec![FREE; n];
    v[..2].fill(E1);
    v[2..4].fill(E0);
    MultilinearWitness::new(v)
}

/// Hyperdeterminant of a `2×2` or `2×2×2` tensor given as 4 or 8 entries.
///
/// For three qubits this is Cayley's quartic:
///
/// ```text
///   a000² a111² + a001² a110² + a010² a101² + a100² a011²
/// - 2 (a000 a001 a110 a111 + a000 a010 a101 a111 + a000 a100 a011 a111
///    + a001 a010 a101 a110 + a001 a100 a011 a110 + a010 a100 a011 a101)
/// + 4 (a000 a011 a101 a110 + a001 a010 a100 a111)
/// ```
pub fn hyperdeterminant_of_tensor(t: &[Complex64]) -> Result<Complex64> {
    match t.len() {
        4 => Ok(t[0] * t[3] - t[1] * t[2]),
        8 => {
            let a = |i: usize| t[i];
            let sq = a(0b000) * a(0b000) * a(0b111) * a(0b111)
                + a(0b001) * a(0b001) * a(0b110) * a(0b110)
                + a(0b010) * a(0b010) * a(0b101) * a(0b101)
                + a(0b100) * a(0b100) * a(0b011) * a(0b011);
            let cross = a(0b000) * a(0b001) * a(0b110) * a(0b111)
                + a(0b000) * a(0b010) * a(0b101) * a(0b111)
                + a(0b000) * a(0b100) * a(0b011) * a(0b111)
                + a(0b001) * a(0b010) * a(0b101) * a(0b110)
                + a(0b001) * a(0b100) * a(0b011) * a(0b110)
                + a(0b010) * a(0b100) * a(0b011) * a(0b101);
            let quad = a(0b000) * a(0b011) * a(0b101) * a(0b110)
                + a(0b001) * a(0b010) * a(0b100) * a(0b111);
            Ok(sq - 2.0 * cross + 4.0 * quad)
        }
        len => Err(Error::UnsupportedSize {
            what: "exact hyperdeterminant",
            n: len.trailing_zeros() as usize,
            max: 3,
        }),
    }
}

/// Exact hyperdeterminant for two or three qubits.
pub fn exact_hyperdeterminant(state: &StateVector) -> Result<Complex64> {
    let n = state.num_qubits();
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    if n > 3 {
        return Err(Error::UnsupportedSize { what: "exact hyperdeterminant", n, max: 3 });
    }
    hyperdeterminant_of_tensor(state.amplitudes())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    /// Unit-norm vectors of the best point found.
    pub witness: MultilinearWitness,
    pub report: WitnessReport,
    pub trials_run: usize,
}

/// Randomly restarted block-coordinate descent on `|f|² + Σ|∂f|²` over unit
/// witness vectors.
///
/// Each step replaces one `x^(k)` by the minimizing unit vector of the
/// quadratic form the objective induces on it. Small components are then
/// snapped to zero. A search that reports `vanishes = false` is not a proof
/// that no witness exists.
pub fn random_witness_search(state: &StateVector, trials: usize, seed: u64) -> Result<SearchOutcome> {
    let n = state.num_qubits();
    if n > MAX_SEARCH_QUBITS {
        return Err(Error::UnsupportedSize { what: "witness search", n, max: MAX_SEARCH_QUBITS });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, MultilinearWitness)> = None;
    let mut run = 0;
    for _ in 0..trials {
        run += 1;
        let mut x: Vec<[Complex64; 2]> = (0..n)
            .map(|_| {
                let mut c = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                normalize([c(), c()])
            })
            .collect();
        for _ in 0..400 {
            for k in 0..n {
                x[k] = descend(state.amplitudes(), &x, k);
            }
            if objective(state.amplitudes(), &x) < 1e-28 {
                break;
            }
        }
        for cand in [snap(&x), x] {
            let score = objective(state.amplitudes(), &cand);
            if best.as_ref().map_or(true, |(b, _)| score < *b) {
                best = Some((score, MultilinearWitness { vectors: cand }));
            }
        }
        if best.as_ref().is_some_and(|(b, _)| *b == 0.0) {
            break;
        }
    }
    let (_, witness) = best.expect("at least one trial");
    let witness = witness.normalized();
    let report = evaluate_witness(state, &witness)?;
    Ok(SearchOutcome { witness, report, trials_run: run })
}

fn normalize(v: [Complex64; 2]) -> [Complex64; 2] {
    let r = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if r == 0.0 {
        E0
    } else {
        [v[0] / r, v[1] / r]
    }
}

fn objective(amps: &[Complex64], x: &[[Complex64; 2]]) -> f64 {
    let g0 = contract_except(amps, x, 0);
    let f = x[0][0] * g0[0] + x[0][1] * g0[1];
    let mut total = f.norm_sqr();
    for k in 0..x.len() {
        let g = contract_except(amps, x, k);
        total += g[0].norm_sqr() + g[1].norm_sqr();
    }
    total
}

/// Unit `x^(k)` minimizing the part of the objective that depends on it.
fn descend(amps: &[Complex64], x: &[[Complex64; 2]], k: usize) -> [Complex64; 2] {
    // Each term is |c · x^(k)|² for a coefficient vector c; accumulate Σ c̄ cᵀ.
    let mut h = [[ZERO; 2]; 2];
    let mut add = |c: [Complex64; 2]| {
        for s in 0..2 {
            for t in 0..2 {
                h[s][t] += c[s].conj() * c[t];
            }
        }
    };
    add(contract_except(amps, x, k));
    for j in 0..x.len() {
        if j == k {
            continue;
        }
        let (a, b) = if j < k { (j, k) } else { (k, j) };
        let c = contract_except_two(amps, x, a, b);
        for t in 0..2 {
            // coefficient of x^(k) in ∂f/∂x^(j)_t
            let row = if j < k { [c[t][0], c[t][1]] } else { [c[0][t], c[1][t]] };
            add(row);
        }
    }
    min_eigenvector(h)
}

fn min_eigenvector(h: [[Complex64; 2]; 2]) -> [Complex64; 2] {
    let p = h[0][0].re;
    let r = h[1][1].re;
    let q = h[0][1];
    let lambda = 0.5 * (p + r) - (0.25 * (p - r) * (p - r) + q.norm_sqr()).sqrt();
    let u = [q, Complex64::new(lambda - p, 0.0)];
    let v = [Complex64::new(lambda - r, 0.0), q.conj()];
    let nu = u[0].norm_sqr() + u[1].norm_sqr();
    let nv = v[0].norm_sqr() + v[1].norm_sqr();
    if nu.max(nv) < 1e-300 {
        return if p <= r { E0 } else { E1 };
    }
    normalize(if nu >= nv { u } else { v })
}

fn snap(x: &[[Complex64; 2]]) -> Vec<[Complex64; 2]> {
    x.iter()
        .map(|v| {
            let mut w = *v;
            for c in w.iter_mut() {
                if c.norm() < 1e-6 {
                    *c = ZERO;
                }
            }
            normalize(w)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncoupled::{ncoupled_state, Parity};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn product_state_form() {
        let s = StateVector::from_bits("101").unwrap();
        let w = MultilinearWitness::new(vec![[c(2.0), c(3.0)], [c(5.0), c(7.0)], [c(11.0), c(13.0)]]).unwrap();
        assert_eq!(multilinear_form(&s, &w).unwrap(), c(3.0 * 5.0 * 13.0));
        let p = partials(&s, &w).unwrap();
        assert_eq!(p, vec![c(0.0), c(65.0), c(39.0), c(0.0), c(0.0), c(15.0)]);
    }

    #[test]
    fn w_partials_match_closed_form() {
        let s = StateVector::w(4).unwrap();
        let w = MultilinearWitness::new(vec![
            [c(2.0), c(1.0)],
            [c(3.0), c(1.0)],
            [c(5.0), c(1.0)],
            [c(7.0), c(1.0)],
        ])
        .unwrap();
        let p = partials(&s, &w).unwrap();
        let zeros = [2.0, 3.0, 5.0, 7.0];
        for k in 0..4 {
            let prod: f64 = (0..4).filter(|&j| j != k).map(|j| zeros[j]).product();
            assert!((p[2 * k + 1] - c(prod / 2.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn constructive_witnesses() {
        for n in 3..=8 {
            assert!(evaluate_witness(&StateVector::w(n).unwrap(), &w_state_witness(n).unwrap()).unwrap().vanishes);
        }
        for n in 4..=8 {
            assert!(evaluate_witness(&StateVector::ghz(n).unwrap(), &ghz_state_witness(n).unwrap()).unwrap().vanishes);
        }
        assert!(w_state_witness(2).is_err());
        assert!(ghz_state_witness(3).is_err());
    }

    #[test]
    fn trivial_witness_rejected() {
        assert_eq!(
            MultilinearWitness::new(vec![[ONE, ZERO], [ZERO, ZERO]]),
            Err(Error::TrivialWitness(1))
        );
    }

    #[test]
    fn exact_small_hyperdeterminants() {
        let psi2 = ncoupled_state(2, Parity::Even).unwrap();
        assert!((exact_hyperdeterminant(&psi2).unwrap() - c(0.5)).norm() < 1e-15);
        assert!((exact_hyperdeterminant(&StateVector::ghz(3).unwrap()).unwrap() - c(0.25)).norm() < 1e-15);
        assert_eq!(exact_hyperdeterminant(&StateVector::w(3).unwrap()).unwrap(), ZERO);
        assert!(exact_hyperdeterminant(&StateVector::zero(4).unwrap()).is_err());
    }

    #[test]
    fn search_finds_w_and_product_witnesses() {
        let out = random_witness_search(&StateVector::w(4).unwrap(), 10, 0).unwrap();
        assert!(out.report.vanishes, "{:?}", out.report);
        let out = random_witness_search(&StateVector::from_bits("0110").unwrap(), 10, 0).unwrap();
        assert!(out.report.vanishes, "{:?}", out.report);
    }

    #[test]
    fn search_does_not_vanish_on_ghz3() {
        let out = random_witness_search(&StateVector::ghz(3).unwrap(), 10, 0).unwrap();
        assert!(!out.report.vanishes);
    }

    #[test]
    fn search_is_deterministic() {
        let s = StateVector::w(3).unwrap();
        assert_eq!(random_witness_search(&s, 3, 7).unwrap(), random_witness_search(&s, 3, 7).unwrap());
    }
}
