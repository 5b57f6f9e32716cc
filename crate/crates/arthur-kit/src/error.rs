use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zeta {hint} contradicts sign(a-b) for block ({a},{b})")]
    ZetaConflict { a: u32, b: u32, hint: String },
    #[error("total dimension {found} does not match N = {expected}")]
    DimensionMismatch { expected: u64, found: u64 },
    #[error("determinant {found} does not match discriminant {expected}")]
    DeterminantMismatch { expected: String, found: String },
    #[error("self-duality violated: {0}")]
    SelfDualityViolation(String),
    #[error("block {0} is not of good parity and has odd multiplicity")]
    OddMultiplicityNonGoodBlock(String),
    #[error("parameter is not of good parity")]
    NotGoodParity,
    #[error("order is not admissible: {0}")]
    NotAdmissible(String),
    #[error("invalid cuspidal label: {0}")]
    InvalidLabel(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("exponent vector is not dominant")]
    NotDominant,
    #[error("index mismatch: expected length {expected}, found {found}")]
    IndexMismatch { expected: usize, found: usize },
    #[error("character is not trivial on s0")]
    CharacterNotInDual,
    #[error("labels belong to different parameters")]
    ParameterMismatch,
    #[error("ladder condition violated: {0}")]
    LadderConditionViolated(String),
    #[error("block {0} is irreducible (A = B)")]
    BlockIrreducible(usize),
    #[error("parameter does not have discrete diagonal restriction")]
    NotDdr,
    #[error("opaque atom: {0}")]
    OpaqueAtom(String),
    #[error("rewrite budget of {0} steps exceeded")]
    NonTermination(usize),
    #[error("invalid endoscopic partition: {0}")]
    InvalidPartition(String),
    #[error("invalid Levi selection: {0}")]
    InvalidLeviSelection(String),
    #[error("block index {0} out of range")]
    BlockOutOfRange(usize),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZetaConflict { .. } => "ZetaConflict",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::DeterminantMismatch { .. } => "DeterminantMismatch",
            Error::SelfDualityViolation(_) => "SelfDualityViolation",
            Error::OddMultiplicityNonGoodBlock(_) => "OddMultiplicityNonGoodBlock",
            Error::NotGoodParity => "NotGoodParity",
            Error::NotAdmissible(_) => "NotAdmissible",
            Error::InvalidLabel(_) => "InvalidLabel",
            Error::Schema(_) => "Schema",
            Error::NotDominant => "NotDominant",
            Error::IndexMismatch { .. } => "IndexMismatch",
            Error::CharacterNotInDual => "CharacterNotInDual",
            Error::ParameterMismatch => "ParameterMismatch",
            Error::LadderConditionViolated(_) => "LadderConditionViolated",
            Error::BlockIrreducible(_) => "BlockIrreducible",
            Error::NotDdr => "NotDDR",
            Error::OpaqueAtom(_) => "OpaqueAtom",
            Error::NonTermination(_) => "NonTermination",
            Error::InvalidPartition(_) => "InvalidPartition",
            Error::InvalidLeviSelection(_) => "InvalidLeviSelection",
            Error::BlockOutOfRange(_) => "BlockOutOfRange",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
