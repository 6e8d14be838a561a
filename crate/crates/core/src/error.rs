use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("substitution is not prolongable: image of 1 must start with the letter 1")]
    NotProlongable,

    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    #[error("standard-word recursion stopped at {produced} symbols, {needed} requested")]
    InsufficientDirectives { needed: usize, produced: usize },

    #[error("invalid directive list: {0}")]
    InvalidDirectives(String),

    #[error("sequence too short: need {needed} symbols, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("0-1 criterion requires c_0 = 1")]
    LeadingZero,

    #[error("H_{order} is not divisible by 2^{}", order - 1)]
    NotDivisible { order: usize },

    #[error("J-fraction expansion breaks at order {order}: Hankel determinant is even")]
    NotApwenianPrefix { order: usize },

    #[error("approximant index {requested} exceeds expansion depth {depth}")]
    DepthExceeded { requested: usize, depth: usize },

    #[error("Hankel determinant H_{order} vanishes")]
    ZeroHankel { order: usize },

    #[error("modulus {0} is even")]
    EvenModulus(u64),

    #[error("modulus {0} is below 3")]
    ModulusTooSmall(u64),

    #[error("{0} is neither an odd prime power nor a product of two distinct odd primes")]
    UnsupportedShape(u64),

    #[error("prime {prime} fails mu(p^2) = mu(p) * p")]
    WieferichCondition { prime: u64 },

    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),

    #[error("product factor {index} vanishes at the evaluation point")]
    ZeroFactor { index: usize },

    #[error("parse error at index {index}: {message}")]
    Parse { index: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Whether the error signals a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::NotDivisible { .. } | Error::Invariant(_))
    }
}

pub(crate) fn ensure_len(got: usize, needed: usize) -> Result<()> {
    if got < needed {
        Err(Error::TooShort { needed, got })
    } else {
        Ok(())
    }
}
