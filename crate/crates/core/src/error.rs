use thiserror::Error;

use crate::recurrence::HypothesisReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is undefined for the zero function")]
    ZeroFunction(&'static str),
    #[error("input #{0} is the zero polynomial")]
    ZeroInput(usize),
    #[error("all entries of the tuple are zero")]
    AllZero,
    #[error("place polynomial `{0}` must be non-constant")]
    ConstantPlace(String),
    #[error("place polynomial `{0}` is not squarefree")]
    NotSquarefree(String),
    #[error("polynomials `{0}` and `{1}` of the S-set are not coprime")]
    NotCoprime(String, String),
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("characteristic roots #{0} and #{1} coincide")]
    RepeatedRoot(usize, usize),
    #[error("recurrence order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("coefficient #{0} of the recurrence is zero")]
    ZeroCoefficient(usize),
    #[error("characteristic root #{0} is zero")]
    ZeroRoot(usize),
    #[error("the characteristic polynomial does not vanish at root #{0}")]
    NotARoot(usize),
    #[error("`{0}` and `{1}` are multiplicatively dependent")]
    Dependent(String, String),
    #[error("`{0}` is constant")]
    ConstantInput(String),
    #[error("the recurrence is degenerate: roots #{0} and #{1} have a constant ratio")]
    Degenerate(usize, usize),
    #[error("characteristic root #{0} is constant")]
    ConstantRoot(usize),
    #[error("hypotheses violated: {0}")]
    Hypothesis(Box<HypothesisReport>),
    #[error("search would need {needed} evaluations, above the ceiling of {ceiling}")]
    CostCeiling { needed: u128, ceiling: u64 },
    #[error("bound arithmetic overflowed while computing {0}")]
    Overflow(&'static str),
    #[error("offset enumeration would visit {needed} assignments, above the limit of {limit}")]
    StrictLimit { needed: u128, limit: u64 },
    #[error("solution {found:?} exceeds the computed bound {bound}")]
    BoundViolated { found: Vec<u32>, bound: u64 },
    #[error("{0}")]
    Parse(#[from] crate::ratfunc::ParseError),
}
