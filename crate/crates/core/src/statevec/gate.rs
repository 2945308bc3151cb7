use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use super::{StateVector, ZERO};
use crate::bits::qubit_mask;
use crate::error::{Error, Result};
use crate::tolerance::DEFAULT_NORM;

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    /// Targets are `[control, target]`.
    Cnot,
    /// Row-major `2^k x 2^k` unitary; the first target is the most
    /// significant bit of the local index.
    Custom(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    kind: GateKind,
    targets: Vec<usize>,
}

impl GateOp {
    pub fn h(q: usize) -> Self {
        Self { kind: GateKind::H, targets: vec![q] }
    }

    pub fn x(q: usize) -> Self {
        Self { kind: GateKind::X, targets: vec![q] }
    }

    pub fn y(q: usize) -> Self {
        Self { kind: GateKind::Y, targets: vec![q] }
    }

    pub fn z(q: usize) -> Self {
        Self { kind: GateKind::Z, targets: vec![q] }
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        if control == target {
            return Err(Error::DuplicateTarget(control));
        }
        Ok(Self { kind: GateKind::Cnot, targets: vec![control, target] })
    }

    /// Arbitrary unitary on `targets`, checked to within 1e-12.
    pub fn custom(targets: Vec<usize>, matrix: Vec<Complex64>) -> Result<Self> {
        for (i, t) in targets.iter().enumerate() {
            if targets[..i].contains(t) {
                return Err(Error::DuplicateTarget(*t));
            }
        }
        let dim = 1usize << targets.len();
        if targets.is_empty() || matrix.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: matrix.len() });
        }
        let deviation = unitarity_deviation(&matrix, dim);
        if deviation > DEFAULT_NORM {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { kind: GateKind::Custom(matrix), targets })
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn is_clifford(&self) -> bool {
        !matches!(self.kind, GateKind::Custom(_))
    }

    /// The adjoint gate.
    pub fn dagger(&self) -> Self {
        match &self.kind {
            GateKind::Custom(m) => {
                let dim = 1usize << self.targets.len();
                let mut adj = vec![ZERO; dim * dim];
                for r in 0..dim {
                    for c in 0..dim {
                        adj[c * dim + r] = m[r * dim + c].conj();
                    }
                }
                Self { kind: GateKind::Custom(adj), targets: self.targets.clone() }
            }
            _ => self.clone(),
        }
    }
}

impl std::fmt::Display for GateOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self.kind {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::Cnot => "CNOT",
            GateKind::Custom(_) => "U",
        };
        // 1-based qubit labels, matching ket notation
        let labels: Vec<String> = self.targets.iter().map(|t| (t + 1).to_string()).collect();
        write!(f, "{}[{}]", name, labels.join(","))
    }
}

fn unitarity_deviation(m: &[Complex64], dim: usize) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = ZERO;
            for k in 0..dim {
                acc += m[k * dim + i].conj() * m[k * dim + j];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((acc - target).norm());
        }
    }
    dev
}

/// `U|ψ⟩` for a single gate.
pub fn apply_gate(state: &StateVector, gate: &GateOp) -> Result<StateVector> {
    let n = state.num_qubits();
    for &t in &gate.targets {
        if t >= n {
            return Err(Error::QubitOutOfRange { qubit: t, n });
        }
    }
    let mut amps = state.amplitudes().to_vec();
    match &gate.kind {
        GateKind::H => {
            let h = FRAC_1_SQRT_2;
            for_pairs(&mut amps, qubit_mask(n, gate.targets[0]), |a, b| {
                (h * (a + b), h * (a - b))
            });
        }
        GateKind::X => for_pairs(&mut amps, qubit_mask(n, gate.targets[0]), |a, b| (b, a)),
        GateKind::Y => {
            let i = Complex64::i();
            for_pairs(&mut amps, qubit_mask(n, gate.targets[0]), |a, b| (-i * b, i * a));
        }
        GateKind::Z => for_pairs(&mut amps, qubit_mask(n, gate.targets[0]), |a, b| (a, -b)),
        GateKind::Cnot => {
            let c = qubit_mask(n, gate.targets[0]);
            let t = qubit_mask(n, gate.targets[1]);
            for idx in 0..amps.len() {
                if idx & c != 0 && idx & t == 0 {
                    amps.swap(idx, idx | t);
                }
            }
        }
        GateKind::Custom(m) => apply_dense(&mut amps, n, &gate.targets, m),
    }
    Ok(StateVector::from_raw(n, amps))
}

/// Apply gates in order.
pub fn apply_circuit(state: &StateVector, circuit: &[GateOp]) -> Result<StateVector> {
    circuit.iter().try_fold(state.clone(), |s, g| apply_gate(&s, g))
}

/// `U†` as a circuit: reversed order, each gate adjointed.
pub fn inverse_circuit(circuit: &[GateOp]) -> Vec<GateOp> {
    circuit.iter().rev().map(GateOp::dagger).collect()
}

fn for_pairs(
    amps: &mut [Complex64],
    mask: usize,
    f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64),
) {
    for idx in 0..amps.len() {
        if idx & mask == 0 {
            let (a, b) = f(amps[idx], amps[idx | mask]);
            amps[idx] = a;
            amps[idx | mask] = b;
        }
    }
}

fn apply_dense(amps: &mut [Complex64], n: usize, targets: &[usize], m: &[Complex64]) {
    let k = targets.len();
    let dim = 1usize << k;
    let masks: Vec<usize> = targets.iter().map(|&t| qubit_mask(n, t)).collect();
    let all: usize = masks.iter().sum();
    // offsets[local] = global bits set by local index `local`
    let offsets: Vec<usize> = (0..dim)
        .map(|local| {
            (0..k)
                .filter(|j| local & (1 << (k - 1 - j)) != 0)
                .map(|j| masks[j])
                .sum()
        })
        .collect();
    let mut buf = vec![ZERO; dim];
    for base in 0..amps.len() {
        if base & all != 0 {
            continue;
        }
        for (local, off) in offsets.iter().enumerate() {
            buf[local] = amps[base | off];
        }
        for (row, off) in offsets.iter().enumerate() {
            amps[base | off] = (0..dim).map(|col| m[row * dim + col] * buf[col]).sum();
        }
    }
}
