//! Numerical comparison thresholds shared by every module.

use serde::Serialize;

/// Default elementwise comparison tolerance.
pub const DEFAULT_CMP: f64 = 1e-9;
/// Default tolerance on state norms and density-matrix traces.
pub const DEFAULT_NORM: f64 = 1e-12;
/// Eigenvalues (and probabilities) below this are treated as exact zeros.
pub const EIGEN_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub cmp: f64,
    pub norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { cmp: DEFAULT_CMP, norm: DEFAULT_NORM }
    }
}

impl Tolerances {
    pub fn with_cmp(cmp: f64) -> Self {
        Self { cmp, ..Self::default() }
    }
}
