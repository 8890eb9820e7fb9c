use thiserror::Error;

/// Errors raised across the crate.
///
/// Some variants flag internal inconsistencies (`OracleMismatch`,
/// `NonIntegralCoefficient`, `NotRational` on a character inner product):
/// these are never expected on valid input and indicate a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cyclotomic context mismatch: zeta_{left} vs zeta_{right}")]
    ContextMismatch { left: u32, right: u32 },

    #[error("value is not rational")]
    NotRational,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("gcd(n,k)={gcd} (n={n}, k={k})")]
    GcdViolation { n: i64, k: i64, gcd: i64 },

    #[error("k^m = {residue} mod n, expected 1 (k={k}, m={m}, n={n})")]
    OrderCongruenceViolation { k: i64, m: i64, n: i64, residue: i64 },

    #[error("l(k-1) = {residue} mod n, expected 0 (k={k}, l={l}, n={n})")]
    TwistCongruenceViolation { k: i64, l: i64, n: i64, residue: i64 },

    #[error("table is not a Latin square: {0}")]
    NotLatin(String),

    #[error("table is not a group: {0}")]
    NotAGroup(String),

    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("order {0} exceeds the supported maximum of 64")]
    TooLarge(usize),

    #[error("character label ({a},{alpha}) out of range")]
    LabelOutOfRange { a: usize, alpha: usize },

    #[error("fractional-part combination {0} is not an integer")]
    NonIntegerRhs(String),

    #[error("product coefficient {0} is not a nonnegative integer")]
    NonIntegralCoefficient(String),

    #[error("closed-form and oracle decompositions disagree: {0}")]
    OracleMismatch(String),

    #[error("not a cover: {0}")]
    NotACover(String),

    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },

    #[error("ill-posed input: {0}")]
    IllPosed(String),

    #[error("dihedral degree {0} is odd; only even degrees are supported")]
    OddDegree(usize),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("case analysis violated: {0}")]
    CaseAnalysisViolation(String),

    #[error("invalid sigma: {0}")]
    InvalidSigma(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
