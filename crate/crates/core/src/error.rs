use thiserror::Error;

/// Errors shared across the simulation stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {requested} outside supported range 1..={max}")]
    ResourceLimit { requested: usize, max: usize },

    #[error("amplitude array length {len} is not a power of two >= 2")]
    BadShape { len: usize },

    #[error("state has zero norm")]
    DegenerateState,

    #[error("qubit index {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("two-qubit gate needs distinct qubits (got {qubit} twice)")]
    DuplicateQubit { qubit: usize },

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("basis index {index} out of range for {num_states} states")]
    IndexOutOfRange { index: usize, num_states: usize },

    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("imaginary residue {residue:.3e} exceeds {tolerance:.3e} in {context}")]
    NumericConsistency {
        context: &'static str,
        residue: f64,
        tolerance: f64,
    },

    #[error("correlation undefined: {side} input is constant")]
    ConstantField { side: &'static str },

    #[error("curves cross more than once (at n = {0:?})")]
    AmbiguousCrossing(Vec<f64>),

    #[error("invalid configuration field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
