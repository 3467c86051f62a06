use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus < 3 (got {0})")]
    GenusTooSmall(usize),

    #[error("genus mismatch: {left} vs {right}")]
    GenusMismatch { left: usize, right: usize },

    #[error("class has {0} coordinates, expected an even count of at least 6")]
    BadClassLength(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not square with even dimension ({rows}x{cols})")]
    BadMatrixShape { rows: usize, cols: usize },

    #[error("matrix does not preserve the intersection form")]
    NotSymplectic,

    #[error("integer overflow in lattice arithmetic")]
    Overflow,

    #[error("zero class has no increasing twist")]
    ZeroClass,

    #[error("separating curve {0} must carry the zero class")]
    SeparatingNonzero(String),

    #[error("duplicate curve id {0}")]
    DuplicateCurve(String),

    #[error("unresolved curve id {0}")]
    UnresolvedCurve(String),

    #[error("twist exponent must be nonzero (curve {0})")]
    ZeroExponent(String),

    #[error("relation {relation}: declared i({a}, {b}) = {declared}, computed {computed}")]
    MetadataMismatch {
        relation: String,
        a: String,
        b: String,
        declared: i64,
        computed: i64,
    },

    #[error("unknown generator {0}")]
    UnknownGenerator(String),

    #[error("generator {0} has the zero class")]
    ZeroGenerator(String),

    #[error("no generator for basis curve {0}")]
    MissingBasisGenerator(String),

    #[error("coefficient at the zero class violates the mean-zero constraint")]
    MeanZeroViolation,

    #[error("grid size {n} aliases: need more than {needed}")]
    Aliasing { n: u64, needed: u64 },

    #[error("curves {0} and {1} are not a jointly non-separating pair")]
    NotJointlyNonSeparating(String, String),

    #[error("relation {0} has a nonzero cocycle residual")]
    RelationResidual(String),

    #[error("solution has a nonzero residual")]
    NonzeroResidual,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
