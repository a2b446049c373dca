use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system is infeasible")]
    Infeasible,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("sublattice containment fails")]
    NotSublattice,
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("operation requires a Lie algebra")]
    NotLie,
    #[error("algebra is not Carnot")]
    NotCarnot,
    #[error("matrix is not an automorphism of the algebra")]
    NotAutomorphism,
    #[error("subspace is not a complement of the derived subalgebra")]
    BadComplement,
    #[error("invalid grading: {0}")]
    BadGrading(String),
    #[error("grading is not non-negative")]
    NotNonnegativeGrading,
    #[error("nilpotency class {class} exceeds the cap {cap}")]
    ClassTooLarge { class: usize, cap: usize },
    #[error("matrix does not stabilize the lattice")]
    DoesNotStabilize,
    #[error("precision budget exhausted while separating eigenvalue moduli")]
    PrecisionExhausted,
    #[error("enumeration budget of {budget} lattice points exceeded")]
    BoxTooLarge { budget: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid algebra: {0}")]
    Validation(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
