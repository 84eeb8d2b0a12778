use thiserror::Error;

/// Errors produced by the relaxation pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty sequence")]
    EmptySequence,

    #[error("enumeration too large: n = {n} (supported 1..={max})")]
    EnumerationTooLarge { n: usize, max: usize },

    #[error("invalid descent-top set {values:?} for n = {n}: {reason}")]
    InvalidDescentTopSet {
        n: usize,
        values: Vec<usize>,
        reason: &'static str,
    },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("no closed form for |X| = {0}")]
    NoClosedForm(usize),

    #[error("invalid monomial {indices:?} in {n} variables")]
    InvalidMonomial { n: usize, indices: Vec<usize> },

    #[error("incomplete L-form table: missing value for {0}")]
    IncompleteLForm(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("constant coefficient matrix is not positive semidefinite")]
    ConstantTermNotPsd,

    #[error("pencil is PSD on the whole search range down to -2^{bits}: unbounded below")]
    UnboundedBelow { bits: u32 },

    #[error("precision {0} bits is below the minimum of 16")]
    PrecisionTooLow(u32),

    #[error("polynomial is not real-rooted: {distinct} distinct real roots for degree {degree}")]
    NotRealRooted { degree: usize, distinct: usize },

    #[error("polynomial has a root outside the negative half-line")]
    NonNegativeRoot,

    #[error("new vector defined for even n >= 4, got n = {0}")]
    NewVectorParity(usize),

    #[error("degenerate optimizer: quadratic coefficient a vanishes")]
    DegenerateOptimizer,

    #[error("negative discriminant in optimizer: a = {a}, b = {b}, c = {c}")]
    NegativeDiscriminant { a: String, b: String, c: String },

    #[error("no admissible critical point: {0}")]
    NoAdmissibleOptimum(String),

    #[error("sequence needs at least {need} same-sign nonzero entries, got {got}")]
    ShortSequence { need: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
