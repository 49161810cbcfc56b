use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid block structure: {0}")]
    InvalidStructure(String),

    #[error("weights do not define a state (sum = {sum})")]
    NotState { sum: f64 },

    #[error("not a delta-form: per-block Tr(rho_a^-1) values {values:?} disagree")]
    NotDeltaForm { values: Vec<f64> },

    #[error("weight {value} in block {block} is not strictly positive")]
    NonPositiveWeight { block: usize, value: f64 },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("map is not Schur idempotent (residual {residual:.3e})")]
    NotSchurIdempotent { residual: f64 },

    #[error("tensor is not #-idempotent (residual {residual:.3e})")]
    NotIdempotent { residual: f64 },

    #[error("(sigma_i/2 x 1)(xi) is not self-adjoint (residual {residual:.3e})")]
    NotModularSelfAdjoint { residual: f64 },

    #[error("map is not completely positive (min Choi eigenvalue {min_eigenvalue:.3e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("graph has quantum sources in blocks {blocks:?}; the Fock construction assumes no quantum sources")]
    HasQuantumSource { blocks: Vec<usize> },

    #[error("Fock truncation budget exceeded: {coordinates} coordinates > {limit}")]
    BudgetExceeded { coordinates: usize, limit: usize },

    #[error("level count must be at least 1")]
    InvalidLevels,

    #[error("vector does not generate the correspondence (rank {rank} < {dim})")]
    NotGenerating { rank: usize, dim: usize },

    #[error("induced map is not a quantum adjacency matrix (Schur residual {residual:.3e})")]
    NotQuantumAdjacency { residual: f64 },

    #[error("candidate isomorphism fails (residual {residual:.3e})")]
    NotIsomorphic { residual: f64 },

    #[error("correspondences are over different algebras")]
    MismatchedBase,

    #[error("graph is not classical: {0}")]
    NotClassical(String),

    #[error(
        "bad normalization in block {block}: Tr(rho^-1 T*T) = {value} but delta^2 = {delta_sq}"
    )]
    BadNormalization {
        block: usize,
        value: f64,
        delta_sq: f64,
    },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("state is not invariant under the automorphism (residual {residual:.3e})")]
    StateNotInvariant { residual: f64 },

    #[error("adjacency entry ({row},{col}) = {value} is not 0 or 1")]
    NotZeroOne { row: usize, col: usize, value: f64 },

    #[error("self-check failed: {what} residual {residual:.3e}")]
    ResidualTooLarge { what: String, residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// The variant name, used as a stable error code in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::ShapeMismatch(_) => "ShapeMismatch",
            Self::InvalidStructure(_) => "InvalidStructure",
            Self::NotState { .. } => "NotState",
            Self::NotDeltaForm { .. } => "NotDeltaForm",
            Self::NonPositiveWeight { .. } => "NonPositiveWeight",
            Self::IndexOutOfRange(_) => "IndexOutOfRange",
            Self::NotSchurIdempotent { .. } => "NotSchurIdempotent",
            Self::NotIdempotent { .. } => "NotIdempotent",
            Self::NotModularSelfAdjoint { .. } => "NotModularSelfAdjoint",
            Self::NotCompletelyPositive { .. } => "NotCompletelyPositive",
            Self::HasQuantumSource { .. } => "HasQuantumSource",
            Self::BudgetExceeded { .. } => "BudgetExceeded",
            Self::InvalidLevels => "InvalidLevels",
            Self::NotGenerating { .. } => "NotGenerating",
            Self::NotQuantumAdjacency { .. } => "NotQuantumAdjacency",
            Self::NotIsomorphic { .. } => "NotIsomorphic",
            Self::MismatchedBase => "MismatchedBase",
            Self::NotClassical(_) => "NotClassical",
            Self::BadNormalization { .. } => "BadNormalization",
            Self::NotUnitary { .. } => "NotUnitary",
            Self::InvalidPermutation(_) => "InvalidPermutation",
            Self::StateNotInvariant { .. } => "StateNotInvariant",
            Self::NotZeroOne { .. } => "NotZeroOne",
            Self::ResidualTooLarge { .. } => "ResidualTooLarge",
            Self::Parse(_) => "Parse",
            Self::Io(_) => "Io",
        }
    }
}
