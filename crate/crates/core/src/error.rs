use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("permutations are not conjugate")]
    NotConjugate,
    #[error("permutation is not a single cycle")]
    NotSingleCycle,
    #[error("divisor is not monic")]
    NonMonicDivisor,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("F_{p} is not admissible: {reason}")]
    InadmissibleField { p: u64, reason: String },
    #[error("order {d} does not divide p-1 = {}", p - 1)]
    OrderNotDividing { d: u64, p: u64 },
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("characteristic polynomial needs p > n (p = {p}, n = {n})")]
    FieldTooSmall { p: u64, n: usize },
    #[error("structure constants are not commutative at ({i}, {j}, {k})")]
    NotCommutative { i: usize, j: usize, k: usize },
    #[error("map is not an automorphism")]
    NotAutomorphism,
    #[error("vector is not an idempotent")]
    NotIdempotent,
    #[error("search space {needed} exceeds cap {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("idempotent is not semisimple: eigenspace dimensions sum to {found} < {n}")]
    NonSemisimple { found: usize, n: usize },
    #[error("eigenvector formula mismatch: {0}")]
    FormulaMismatch(String),
    #[error("operator is not invertible")]
    NotInvertible,
    #[error("idempotents span rank {rank} < {n}")]
    RankDeficient { rank: usize, n: usize },
    #[error("map set is not closed under composition")]
    NotClosed,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("axis has non-invertible left multiplication")]
    AxisNotInvertible,
    #[error("law violated: {0}")]
    LawViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code: 1 property violation, 2 invalid input, 3 resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidPermutation(_)
            | Error::DegreeMismatch { .. }
            | Error::NotSingleCycle
            | Error::InvalidField(_)
            | Error::InadmissibleField { .. }
            | Error::OrderNotDividing { .. }
            | Error::FieldMismatch
            | Error::DimensionMismatch { .. }
            | Error::FieldTooSmall { .. }
            | Error::NotIdempotent
            | Error::ZeroPolynomial
            | Error::NonMonicDivisor
            | Error::Parse(_) => 2,
            Error::CapExceeded { .. } | Error::BoundExceeded(_) => 3,
            _ => 1,
        }
    }
}
