use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: {left} vs {right} qubits")]
    SizeMismatch { left: usize, right: usize },

    #[error("{qubits} qubits exceeds the dense limit of {limit}")]
    DenseLimit { qubits: usize, limit: usize },

    #[error("at most {max} qubits are supported, got {got}")]
    TooManyQubits { got: usize, max: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("row-space enumeration supports at most {max} rows, got {got}")]
    TooManyRows { got: usize, max: usize },

    #[error("the A-matrix has no nonzero entries")]
    ZeroMatrix,

    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NonHermitian(f64),

    #[error("operator is not an orthogonal projector (deviation {0:.3e})")]
    NotProjector(f64),

    #[error("penalty does not commute with the projector (commutator norm {0:.3e})")]
    PenaltyProjectorCommutator(f64),

    #[error("blocks overlap on qubit {0}")]
    OverlappingBlocks(usize),

    #[error("term {term} is not supported inside a single block")]
    TermCrossesBlocks { term: String },

    #[error("encoding synthesis failed: {first} and {second} {reason}")]
    Synthesis { first: String, second: String, reason: String },

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("term {0} cannot be mapped onto the code's logical operators")]
    UnmappableTerm(String),

    #[error("diagonal blocks of V - W survive on P (residual {0:.3e}); the spectral form of K(t) does not apply")]
    SurvivingDiagonalBlocks(f64),

    #[error("index set does not reproduce P (residual {0:.3e})")]
    IndexSetMismatch(f64),

    #[error("block {block}: local decoupling condition violated (residual {residual:.3e})")]
    BlockConditionViolated { block: usize, residual: f64 },

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("penalty strength must be positive")]
    ZeroPenalty,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
