use thiserror::Error;

/// Every failure the library reports. Verification failures carry a witness
/// rendered as text so callers can print it without extra context.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("map is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("differential does not square to zero: {0}")]
    NotSquareZero(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("map is not surjective in degree {degree}")]
    NotSurjective { degree: i32 },
    #[error("not an acyclic fibration: {0}")]
    NotAcyclicFibration(String),
    #[error("Jacobi identity fails in arity {arity} on {witness}")]
    JacobiViolation { arity: usize, witness: String },
    #[error("dg-morphism condition fails in arity {arity} on {witness}")]
    MorphismViolation { arity: usize, witness: String },
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("morphism is not strict")]
    NotStrict,
    #[error("morphism is not a fibration")]
    NotFibration,
    #[error("morphism is not an L-infinity epimorphism")]
    NotEpi,
    #[error("partial data invalid in arity {arity}: {detail}")]
    PartialDataInvalid { arity: usize, detail: String },
    #[error("cone has no filler: {0}")]
    NoFiller(String),
    #[error("cone filler is not unique: {0}")]
    NonUniqueFiller(String),
    #[error("axiom violation: {0}")]
    AxiomViolation(String),
    #[error("point is not a Maurer-Cartan element: {0}")]
    NotMC(String),
    #[error("points are not matched: {0}")]
    NotMatched(String),
    #[error("induced map on homology is not surjective in degree {degree}")]
    HomologyNotSurjective { degree: i32 },
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
