pub mod bits;
pub mod densecoding;
pub mod error;
pub mod hyperdet;
pub mod ising;
pub mod ncoupled;
pub mod pauli;
pub mod stabiliser;
pub mod statevec;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
pub use pauli::{Letter, PauliString, Phase};
pub use statevec::{DensityMatrix, GateOp, MeasurementDistribution, StateVector};
pub use ncoupled::{BasisLabel, Parity};
pub use stabiliser::{CodeFamily, CodeSpec, StabiliserGenSet, Syndrome};
pub use tolerance::Tolerances;
