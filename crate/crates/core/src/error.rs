use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("bad exponent {0}: the field degree must be at least 1")]
    BadExponent(u32),

    #[error("field too large: {0} elements does not fit the element encoding")]
    FieldTooLarge(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("not a basis: {0}")]
    NotABasis(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("formula domain: {0}")]
    FormulaDomain(String),

    #[error("enumeration too large: {what} needs {needed} elements, budget is {budget}")]
    BudgetExceeded {
        what: String,
        needed: String,
        budget: u64,
    },

    #[error("use bounds: census over {needed} subspaces exceeds the budget of {budget}")]
    CensusTooLarge { needed: String, budget: u64 },

    #[error("undefined for zero code")]
    ZeroCode,

    #[error("bound undefined; ρ = 0 for the ambient space")]
    AmbientCode,

    #[error("not a code size: {0}")]
    NotACodeSize(String),

    #[error("non-integral value: {0}")]
    NonIntegral(String),

    #[error("classification requires square matrices (n = m)")]
    RequiresSquare,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
