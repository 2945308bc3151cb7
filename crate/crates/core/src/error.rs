use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit count must be at least {min}, got {n}")]
    TooFewQubits { n: usize, min: usize },

    #[error("{what} supports at most {max} qubits, got {n}")]
    UnsupportedSize { what: &'static str, n: usize, max: usize },

    #[error("qubit {qubit} out of range for a {n}-qubit register")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("gate targets must be distinct, qubit {0} repeated")]
    DuplicateTarget(usize),

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm {norm:.15})")]
    NotNormalized { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(&'static str),

    #[error("invalid probability table: {0}")]
    InvalidDistribution(&'static str),

    #[error("partial trace needs at least one kept qubit")]
    EmptyKeepSet,

    #[error("bipartition cut {m} is not inside 0 < m < {n}")]
    InvalidCut { m: usize, n: usize },

    #[error("invalid bit string {0:?}")]
    InvalidBitString(String),

    #[error("invalid Pauli string {0:?}")]
    InvalidPauliString(String),

    #[error("message has {found} bits, protocol needs {expected}")]
    MessageLength { expected: usize, found: usize },

    #[error("coupling is undefined: every probability in the query is below the floor {eps:e}")]
    UndefinedCoupling { eps: f64 },

    #[error("invalid coupling query: {0}")]
    InvalidQuery(&'static str),

    #[error("top coupling |I| = {value} exceeds the supported range {max}")]
    CouplingOutOfRange { value: f64, max: f64 },

    #[error("witness vector {0} is the zero vector")]
    TrivialWitness(usize),

    #[error("no stabiliser generators found for code {0:?}")]
    NoGenerators(String),

    #[error("unrecognized code family {0:?}")]
    UnrecognizedCode(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
