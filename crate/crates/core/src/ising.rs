//! Classical Ising couplings read off computational-basis statistics.
//!
//! Bits are spins in `{0, 1}` and logarithms are natural. A k-point coupling
//! among variables `V` conditions every other spin on 0 and takes the
//! alternating log-odds sum over the `2^k` patterns of `V`.

use serde::Serialize;

use crate::bits::qubit_mask;
use crate::error::{Error, Result};
use crate::statevec::MeasurementDistribution;

pub const DEFAULT_EPS: f64 = 1e-12;
/// Largest accepted `|I|` for [`suppressed_distribution`].
pub const MAX_TOP_COUPLING: f64 = 500.0;
pub const MAX_ISING_BITS: usize = 20;
/// Largest `n` for [`roundtrip_check`] and [`roundtrip_all`].
pub const MAX_ROUNDTRIP_BITS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingQuery {
    variables: Vec<usize>,
    regulariser_eps: f64,
}

impl CouplingQuery {
    /// Variables are 0-based bit positions; order does not matter.
    pub fn new(variables: Vec<usize>) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::InvalidQuery("no variables"));
        }
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(Error::InvalidQuery("repeated variable"));
            }
        }
        Ok(Self { variables, regulariser_eps: DEFAULT_EPS })
    }

    pub fn with_eps(mut self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidQuery("probability floor must be positive"));
        }
        self.regulariser_eps = eps;
        Ok(self)
    }

    pub fn variables(&self) -> &[usize] {
        &self.variables
    }

    pub fn eps(&self) -> f64 {
        self.regulariser_eps
    }
}

/// `J_V = -Σ_p (-1)^{k-|p|} ln max(P(x_V = p, rest = 0), ε)`
pub fn coupling(dist: &MeasurementDistribution, query: &CouplingQuery) -> Result<f64> {
    let n = dist.num_bits();
    if let Some(&v) = query.variables.iter().find(|&&v| v >= n) {
        return Err(Error::QubitOutOfRange { qubit: v, n });
    }
    let k = query.variables.len();
    let masks: Vec<usize> = query.variables.iter().map(|&v| qubit_mask(n, v)).collect();
    let eps = query.regulariser_eps;
    let mut total = 0.0;
    let mut any_above = false;
    for pattern in 0..1usize << k {
        let index: usize = (0..k).filter(|j| pattern >> j & 1 == 1).map(|j| masks[j]).sum();
        let p = dist.probability(index);
        any_above |= p >= eps;
        let sign = if (k - pattern.count_ones() as usize) % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * p.max(eps).ln();
    }
    if !any_above {
        return Err(Error::UndefinedCoupling { eps });
    }
    Ok(-total)
}

/// Boltzmann model whose `k`-spin couplings are `(-1)^{n-k} I / 2^{n-k}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuppressedIsingModel {
    n: usize,
    top_coupling: f64,
}

impl SuppressedIsingModel {
    pub fn new(n: usize, top_coupling: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooFewQubits { n, min: 1 });
        }
        if n > MAX_ISING_BITS {
            return Err(Error::UnsupportedSize { what: "Ising model", n, max: MAX_ISING_BITS });
        }
        if !(top_coupling.abs() <= MAX_TOP_COUPLING) {
            return Err(Error::CouplingOutOfRange { value: top_coupling, max: MAX_TOP_COUPLING });
        }
        Ok(Self { n, top_coupling })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn top_coupling(&self) -> f64 {
        self.top_coupling
    }

    /// Coupling shared by every set of `k` spins.
    pub fn coefficient(&self, k: usize) -> f64 {
        let m = self.n - k;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        sign * self.top_coupling / (1u64 << m) as f64
    }

    /// `E(s) = Σ_{A ⊆ s, A ≠ ∅} J_{|A|}`; depends only on the weight of `s`.
    pub fn energy(&self, s: usize) -> f64 {
        let w = s.count_ones() as usize;
        let mut binom = 1.0;
        let mut e = 0.0;
        for j in 1..=w {
            binom = binom * (w + 1 - j) as f64 / j as f64;
            e += binom * self.coefficient(j);
        }
        e
    }
}

/// `p(s) = exp(-E(s)) / Z`, with `Z` summed exactly in log space.
pub fn suppressed_distribution(model: &SuppressedIsingModel) -> MeasurementDistribution {
    let log_w: Vec<f64> = (0..1usize << model.n).map(|s| -model.energy(s)).collect();
    let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = log_w.iter().map(|l| (l - max).exp()).collect();
    let z: f64 = weights.iter().sum();
    MeasurementDistribution::from_raw(model.n, weights.into_iter().map(|w| w / z).collect())
}

fn check_roundtrip_n(n: usize) -> Result<()> {
    if n > MAX_ROUNDTRIP_BITS {
        return Err(Error::UnsupportedSize { what: "coupling round trip", n, max: MAX_ROUNDTRIP_BITS });
    }
    Ok(())
}

/// `|J_{0..n} - I|` after building the model distribution and re-extracting.
pub fn roundtrip_check(n: usize, top_coupling: f64) -> Result<f64> {
    check_roundtrip_n(n)?;
    let model = SuppressedIsingModel::new(n, top_coupling)?;
    let dist = suppressed_distribution(&model);
    let j = coupling(&dist, &CouplingQuery::new((0..n).collect())?)?;
    Ok((j - top_coupling).abs())
}

/// Largest error over every nonempty spin subset against its model coefficient.
pub fn roundtrip_all(n: usize, top_coupling: f64) -> Result<f64> {
    check_roundtrip_n(n)?;
    let model = SuppressedIsingModel::new(n, top_coupling)?;
    let dist = suppressed_distribution(&model);
    let mut worst = 0.0f64;
    for subset in 1..1usize << n {
        let vars: Vec<usize> = (0..n).filter(|&q| subset & qubit_mask(n, q) != 0).collect();
        let k = vars.len();
        let j = coupling(&dist, &CouplingQuery::new(vars)?)?;
        worst = worst.max((j - model.coefficient(k)).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncoupled::{ncoupled_state, Parity};
    use crate::statevec::measurement_distribution;

    #[test]
    fn bell_statistics_with_floor() {
        let d = measurement_distribution(&ncoupled_state(2, Parity::Even).unwrap());
        let j = coupling(&d, &CouplingQuery::new(vec![0, 1]).unwrap()).unwrap();
        assert!((j - (-2.0 * (0.5f64 / 1e-12).ln())).abs() < 1e-9);
    }

    #[test]
    fn odd_three_qubit_hierarchy() {
        let d = measurement_distribution(&ncoupled_state(3, Parity::Odd).unwrap());
        let eps = 1e-12;
        let i = -4.0 * (0.25f64 / eps).ln();
        let q = |v: Vec<usize>| coupling(&d, &CouplingQuery::new(v).unwrap()).unwrap();
        assert!((q(vec![0, 1, 2]) - i).abs() < 1e-9);
        assert!((q(vec![0, 1]) + i / 2.0).abs() < 1e-9);
        assert!((q(vec![0]) - i / 4.0).abs() < 1e-9);
    }

    #[test]
    fn uniform_distribution_has_no_couplings() {
        let d = MeasurementDistribution::new(3, vec![0.125; 8]).unwrap();
        for v in [vec![0], vec![1, 2], vec![0, 1, 2]] {
            assert!(coupling(&d, &CouplingQuery::new(v).unwrap()).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn undefined_when_everything_is_floored() {
        let d = MeasurementDistribution::new(2, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let q = CouplingQuery::new(vec![0]).unwrap();
        assert_eq!(coupling(&d, &q), Err(Error::UndefinedCoupling { eps: 1e-12 }));
    }

    #[test]
    fn query_validation() {
        assert!(CouplingQuery::new(vec![]).is_err());
        assert!(CouplingQuery::new(vec![1, 1]).is_err());
        assert!(CouplingQuery::new(vec![0]).unwrap().with_eps(0.0).is_err());
    }

    #[test]
    fn zero_coupling_is_uniform() {
        let d = suppressed_distribution(&SuppressedIsingModel::new(1, 0.0).unwrap());
        assert_eq!(d.probabilities(), &[0.5, 0.5]);
    }

    #[test]
    fn strong_negative_coupling_selects_odd_strings_at_three() {
        let d = suppressed_distribution(&SuppressedIsingModel::new(3, -200.0).unwrap());
        for s in 0..8usize {
            let expect = if s.count_ones() % 2 == 1 { 0.25 } else { 0.0 };
            assert!((d.probability(s) - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn range_is_enforced() {
        assert!(matches!(
            SuppressedIsingModel::new(3, 501.0),
            Err(Error::CouplingOutOfRange { .. })
        ));
        assert!(SuppressedIsingModel::new(3, f64::NAN).is_err());
    }

    #[test]
    fn roundtrip_examples() {
        assert!(roundtrip_check(2, -5.0).unwrap() < 1e-9);
        assert_eq!(roundtrip_check(3, 0.0).unwrap(), 0.0);
        assert!(roundtrip_check(4, -12.0).unwrap() < 1e-9);
        assert!(roundtrip_check(11, 1.0).is_err());
    }
}
