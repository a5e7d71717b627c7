use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Input rejections map to exit code 2, budget overruns to 3 and failed
/// internal cross-checks to 4 (see [`Error::exit_code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} must be a prime at least 5")]
    RejectSmallPrime(String),
    #[error("p = {0} is not prime")]
    RejectNotPrime(String),
    #[error("f = {0} is too small (need f >= {1})")]
    RejectDegree(usize, usize),
    #[error("h = {0} is a multiple of q+1, so the induced representation is reducible")]
    RejectReducible(String),
    #[error("gamma and gamma' agree modulo e, the two tame characters must differ")]
    RejectEqualCharacters,
    #[error("determinant congruence h - 1 = gamma + gamma' + nu (mod e) fails")]
    RejectDeterminant,
    #[error("theta must be a nonzero element of the working field")]
    RejectTheta,
    #[error("no h realizes the digit vector with these characters: {0}")]
    NoSolution(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid gene: {0}")]
    InvalidGene(String),
    #[error("invalid field order {0}: need a prime")]
    InvalidField(u64),
    #[error("point is not on the variety")]
    PointNotOnVariety,
    #[error("lattice is not stable under Frobenius at this point")]
    NotIntegral,
    #[error("factor is not a chain of projective lines: {0}")]
    NotAChain(String),
    #[error("budget exceeded: {needed} > cap {cap}")]
    BudgetExceeded { needed: String, cap: u64 },
    #[error("internal cross-check failed: {0}")]
    InternalMismatch(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 3,
            Error::InternalMismatch(_) => 4,
            _ => 2,
        }
    }

    /// Stable machine-readable code used in JSON error records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::RejectSmallPrime(_) => "RejectSmallPrime",
            Error::RejectNotPrime(_) => "RejectNotPrime",
            Error::RejectDegree(..) => "RejectDegree",
            Error::RejectReducible(_) => "RejectReducible",
            Error::RejectEqualCharacters => "RejectEqualCharacters",
            Error::RejectDeterminant => "RejectDeterminant",
            Error::RejectTheta => "RejectTheta",
            Error::NoSolution(_) => "NoSolution",
            Error::Parse(_) => "Parse",
            Error::InvalidGene(_) => "InvalidGene",
            Error::InvalidField(_) => "InvalidField",
            Error::PointNotOnVariety => "PointNotOnVariety",
            Error::NotIntegral => "NotIntegral",
            Error::NotAChain(_) => "NotAChain",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::InternalMismatch(_) => "InternalMismatch",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
