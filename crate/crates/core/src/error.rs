use thiserror::Error;

use crate::pauli::CouplingKey;

pub type Result<T> = std::result::Result<T, DaqcError>;

#[derive(Debug, Error)]
pub enum DaqcError {
    #[error("coupling {0} is not part of the index universe")]
    KeyNotInUniverse(CouplingKey),

    #[error("invalid coupling key: {0}")]
    InvalidKey(String),

    #[error("undefined norm: {0}")]
    UndefinedNorm(String),

    /// A nonzero target coupling sits on an edge the source cannot drive.
    #[error("simulability violated at {0}: nonzero coupling over zero source coupling")]
    SimulabilityViolation(CouplingKey),

    #[error("indeterminate form 0/0 at {0}")]
    IndeterminateForm(CouplingKey),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("duplicate gate pattern {0}")]
    DuplicatePattern(String),

    #[error("requested {requested} patterns but only {available} distinct ones exist")]
    PatternExhaustion { requested: u128, available: u128 },

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("simplex stalled after {pivots} pivots")]
    SolverStall { pivots: usize },

    #[error("brute-force oracle refused: {0}")]
    OracleRefused(String),

    #[error("schedule synthesis infeasible: {0}")]
    Infeasible(String),

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("{n} qubits exceeds the dense simulation cap of {cap}")]
    SizeCap { n: usize, cap: usize },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid initial state: {0}")]
    InvalidState(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Validation(String),

    #[error("trial with seed {seed} failed: {source}")]
    TrialFailed {
        seed: u64,
        #[source]
        source: Box<DaqcError>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl DaqcError {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            DaqcError::Infeasible(_) => 3,
            DaqcError::InternalConsistency(_) => 4,
            DaqcError::TrialFailed { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}
