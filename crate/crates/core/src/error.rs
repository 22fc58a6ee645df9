use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("objects live over different families")]
    FamilyMismatch,

    #[error("unknown class `{0}`")]
    UnknownClass(String),

    #[error("unknown morphism class `{0}`")]
    UnknownHom(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid family table: {reason} (witness: {witness})")]
    InvalidTable { reason: String, witness: String },

    #[error("family `{0}` is infinite; choose a truncation level")]
    NeedsTruncation(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("morphism is not natural at `{0}`")]
    NotNatural(String),

    #[error("invalid Out(G)-representation: {0}")]
    InvalidOutRep(String),

    #[error("functor laws violated: {0}")]
    InvalidRep(String),

    #[error("family is not N-stable: {0}")]
    NotNStable(String),

    #[error("object is supported below index {index}")]
    SupportBelow { index: usize },

    #[error("non-canonical support descriptor: {0}")]
    NonCanonical(String),

    #[error("the ideal's generators are not attested eventually torsion-free")]
    NotAttested,

    #[error("inclusions do not partition the ambient family: {0}")]
    NotAPartition(String),

    #[error("enumeration guard exceeded: {size} > {limit}")]
    GuardExceeded { size: usize, limit: usize },

    #[error("budget exhausted: {0}")]
    BudgetExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
