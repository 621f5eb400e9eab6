use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("modulus is not a monic irreducible of degree {degree} over F_{p}")]
    ReducibleModulus { p: usize, degree: usize },

    #[error("division by zero in F_{q}")]
    DivisionByZero { q: usize },

    #[error("state space q^(n*m) = {states} exceeds budget {budget} (q={q}, m={m}, n={n})")]
    BudgetExceeded {
        q: usize,
        m: usize,
        n: usize,
        states: String,
        budget: u64,
    },

    #[error("vertex construction is undefined at L = 0")]
    DegenerateSimplex,

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("symbol {value} out of range for F_{q} (row {row}, position {pos})")]
    SymbolOutOfRange {
        row: usize,
        pos: usize,
        value: u64,
        q: usize,
    },

    #[error("data dimensions do not match m = {m}, n = {n}")]
    ShapeMismatch { m: usize, n: usize },

    #[error("unknown verify suite '{0}' (expected lemma2, bounds, polytope, identity, or oracle)")]
    UnknownSuite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
