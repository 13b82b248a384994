//! Error type shared by all modules of this crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in this crate.
///
/// The variants fall into four families: structural errors (shape, length
/// and index violations), degenerate inputs (well-shaped but meaningless),
/// capability errors (a hard resource cap was exceeded) and internal
/// consistency errors. The last family signals a broken invariant inside
/// the crate itself and is never caused by user input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("amplitude vector has length {actual}, expected {expected}")]
    AmplitudeLength { expected: usize, actual: usize },

    #[error("state vector must have between 1 and {max} qubits, got {requested}")]
    QubitCountUnsupported { requested: usize, max: usize },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("operator acts on {operator} qubits but the state has {state}")]
    QubitCountMismatch { operator: usize, state: usize },

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitIndex { index: usize, num_qubits: usize },

    #[error("kept-qubit set must be a nonempty strict subset ({kept} of {total} qubits kept)")]
    BadSubsystem { kept: usize, total: usize },

    #[error("dense oracle supports at most {max} qubits, got {requested}")]
    DenseOracleCap { requested: usize, max: usize },

    #[error("exhaustive enumeration supports at most {max} variables, got {requested}")]
    EnumerationCap { requested: usize, max: usize },

    #[error("invalid Pauli axis character {0:?}")]
    InvalidAxis(char),

    #[error("table row {row} has {actual} parties, expected {expected}")]
    RowLength { row: usize, expected: usize, actual: usize },

    #[error("table rows {first} and {second} are identical")]
    DuplicateRow { first: usize, second: usize },

    #[error("party index {index} out of range for {parties} parties")]
    PartyIndex { index: usize, parties: usize },

    #[error("outcome assignment mismatch: {0}")]
    AssignmentMismatch(String),

    #[error("row {row} has {factors} non-identity factor(s); at least two are needed")]
    RowNotExplainable { row: usize, factors: usize },

    #[error("no witness value for party {party} axis {axis} in row {row}")]
    MissingWitnessValue { row: usize, party: usize, axis: char },

    #[error("witness does not satisfy row {row}")]
    WitnessViolatesRow { row: usize },

    #[error("protocol needs at least one run")]
    NoRuns,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal consistency violation: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that indicate a bug in this crate rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }

    /// True for errors produced while parsing text input.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}
