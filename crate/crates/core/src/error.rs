use thiserror::Error;

/// Errors raised by the exact calculus and the checkers built on it.
///
/// Residuals and offending values are carried pre-rendered in the wire form
/// so the error type stays independent of the scalar field.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division leaves a nonzero remainder {remainder}")]
    NonZeroRemainder { remainder: String },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("duplicate interpolation node {node}")]
    DuplicateNode { node: String },

    #[error("empty sample list")]
    EmptySamples,

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("carrier-domain symmetry violated: {0}")]
    InternalSymmetryViolation(String),

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("moment window exhausted: degree {needed} requested, window is {window}")]
    WindowExhausted { needed: usize, window: usize },

    #[error("basis is not a simple set (singular coefficient matrix)")]
    SingularBasis,

    #[error("recurrence depth insufficient: index {needed} requested, data reaches {available}")]
    InsufficientDepth { needed: usize, available: usize },

    #[error("functional is not regular: <u, P_{n}^2> = 0")]
    NotRegular { n: usize },

    #[error("regularity violated at n = {n}")]
    RegularityViolation { n: usize },

    #[error("beta must be nonzero")]
    ZeroBeta,

    #[error("parameter constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("vanishing denominator d_{index} at n = {n}")]
    DegenerateDenominator { n: usize, index: i64 },

    #[error("no solution at n = {n}; residual {residual}")]
    NoSolution { n: usize, residual: String },

    #[error("closed form disagrees with direct expansion at (n, j) = ({n}, {j}): {detail}")]
    Mismatch { n: usize, j: i64, detail: String },

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("no nontrivial solution found")]
    NoneFound,

    #[error("invalid relation witness: {0}")]
    InvalidWitness(String),

    #[error("matrix A_(M+N) is singular")]
    SingularA,

    #[error("degree collapse in {which}: expected degree {expected}, found {found}")]
    DegreeCollapse { which: String, expected: usize, found: String },

    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),

    #[error("sequence is not an orthogonal polynomial sequence: {0}")]
    NotOps(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
