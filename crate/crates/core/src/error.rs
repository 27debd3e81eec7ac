use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("order cap exceeded: {what} has order {order}, cap is {cap}")]
    OrderCapExceeded { what: String, order: usize, cap: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("class mismatch: {0}")]
    ClassMismatch(String),

    #[error("element is not effective (negative or fractional coefficient)")]
    NotEffective,

    #[error("set size cap exceeded: {size} points, cap is {cap}")]
    SizeCapExceeded { size: usize, cap: usize },

    #[error("element is not supported on p-group classes: {0}")]
    NotPIsotropy(String),

    #[error("basis is linearly dependent: rank {rank}, expected {expected}")]
    DependentBasis { rank: usize, expected: usize },

    #[error("p-adic integrality violated: {0}")]
    PAdicIntegralityViolation(String),

    #[error("singular diagonal at row {0}")]
    SingularDiagonal(usize),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::OrderCapExceeded { .. } | Error::SizeCapExceeded { .. } => 3,
            Error::DependentBasis { .. }
            | Error::PAdicIntegralityViolation(_)
            | Error::SingularDiagonal(_)
            | Error::Invariant(_) => 4,
            _ => 2,
        }
    }
}
