use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {count} vertices")]
    InvalidVertex { vertex: usize, count: usize },

    #[error("radius mismatch: {0} vs {1}")]
    RadiusMismatch(usize, usize),

    #[error("permutation representation has no generators")]
    EmptyGenerators,

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("action is not transitive ({orbit} of {degree} points reachable from the base point)")]
    NotTransitive { orbit: usize, degree: usize },

    #[error("group too large to materialize: |SL2(Z/{modulus})| = {order} exceeds {limit}")]
    GroupTooLarge { modulus: u64, order: u64, limit: u64 },

    #[error("invalid modulus {0}: need N >= 2")]
    InvalidModulus(u64),

    #[error("identity element in generating set")]
    IdentityGenerator,

    #[error("generating set is not closed under inversion")]
    AsymmetricGenerators,

    #[error("ill-formed cover assignment: {0}")]
    BadAssignment(String),

    #[error("ill-formed cell complex: {0}")]
    BadComplex(String),

    #[error("degree {k} out of range for a complex of dimension {dim}")]
    DegreeOutOfRange { k: usize, dim: usize },

    #[error("matrix is not symmetric (entry ({row}, {col}) differs by {defect:e})")]
    NotSymmetric { row: usize, col: usize, defect: f64 },

    #[error("matrix dimension {0} exceeds the dense solver cap")]
    MatrixTooLarge(usize),

    #[error("eigensolver did not converge")]
    NoConvergence,

    #[error("grid value {0} outside (0, 1)")]
    GridOutOfRange(f64),

    #[error("unsupported limit measure: {0}")]
    UnsupportedMeasure(String),

    #[error("invalid parameter {name}: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error("tree portion is disconnected")]
    Disconnected,

    #[error("no thin part: translation length {tau} is not below the cutoff {epsilon}")]
    NoThinPart { tau: f64, epsilon: f64 },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("census guard exceeded: {0}")]
    CensusGuard(String),

    #[error("resultant vanishes at n = {0} (cyclotomic factor)")]
    CyclotomicVanishing(usize),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain { name, reason: reason.into() }
}
