use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational number `{0}`")]
pub struct ParseRationalError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: missing `p mksat <n_vars> <n_clauses>` header")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed header")]
    BadHeader { line: usize },
    #[error("line {line}: duplicate header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: malformed clause: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: literal {literal} refers to a variable outside 1..={n_vars}")]
    VarOutOfRange {
        line: usize,
        literal: i64,
        n_vars: usize,
    },
    #[error("line {line}: tautological clause (contains both x{var} and -x{var})")]
    Tautology { line: usize, var: usize },
    #[error("line {line}: multiplicity must be at least 1")]
    ZeroMultiplicity { line: usize },
    #[error("header announces {expected} clause lines, found {found}")]
    ClauseCount { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("enumeration needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("epsilon {0} is outside the open interval (0, 1/4)")]
    EpsilonOutOfRange(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("solution refers to variable {var}, but the kernel only has {n_vars} variables")]
    UnknownVariable { var: usize, n_vars: usize },
    #[error("no K_{{{a},{b}}}-free instance found after {attempts} attempts")]
    GenerationExhausted { a: usize, b: usize, attempts: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
