use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported rank {rank} for {family}")]
    UnsupportedRank { family: String, rank: usize },
    #[error("invalid group family: {0}")]
    InvalidFamily(String),
    #[error("not a root of {family}: {root}")]
    NotARoot { family: String, root: String },
    #[error("input too large for enumeration: {0}")]
    TooLarge(String),
    #[error("invalid flag: {0}")]
    InvalidFlag(String),
    #[error("family mismatch: {0} vs {1}")]
    FamilyMismatch(String, String),
    #[error("not a character of the parabolic: {0}")]
    NotACharacter(String),
    #[error("empty parabolic index, nothing to generate")]
    NothingToGenerate,
    #[error("zero bundle")]
    ZeroBundle,
    #[error("degree must be zero, got {0}")]
    NotDegreeZero(i64),
    #[error("vector is not integral: {0}")]
    NotIntegral(String),
    #[error("vector is not in the kernel lattice: {0}")]
    NotInKernelLattice(String),
    #[error("invalid reduction: {0}")]
    InvalidReduction(String),
    #[error("invalid bundle: {0}")]
    InvalidBundle(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid parabolic index: {0}")]
    InvalidIndex(String),
}
