use thiserror::Error;

/// Errors produced anywhere in the pipeline.
///
/// Variants fall into two families: bad mathematical input (the caller asked
/// for something outside an operation's domain) and verification failures
/// (a computed value contradicts a statement being checked). The CLI maps the
/// first family to exit code 65 and the second to exit code 3.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{0} is not an odd prime")]
    NotOddPrime(String),

    #[error("{0} exceeds the deterministic primality bound")]
    PrimalityBound(String),

    #[error("zero is not allowed here")]
    Zero,

    #[error("negative input rejected: {0}")]
    Negative(String),

    #[error("{0} is not squarefree")]
    NotSquarefree(String),

    #[error("{0} is not a fundamental discriminant")]
    NotFundamentalDiscriminant(i64),

    #[error("hypotheses violated: {0}")]
    HypothesesViolated(String),

    #[error("fundamental unit of Q(sqrt {0}) is half-integral; integer coordinates were asserted")]
    HalfIntegralUnit(i64),

    #[error("no decomposition system matches for d = {0}")]
    NoSystemMatches(i64),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("{radicand} is not a basis radicand of the field")]
    NotInBasis { radicand: i64 },

    #[error("element is not a unit: norm {0}")]
    NotAUnit(String),

    #[error("intermediate integer of {bits} bits exceeds the limit of {limit} bits")]
    SizeLimit { bits: u64, limit: u64 },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("verification failed: {0}")]
    Verification(String),

    /// A failure inside one stage of a larger pipeline.
    #[error("{stage}: {source}")]
    Stage { stage: String, source: Box<Error> },
}

impl Error {
    /// True for failures of a checked mathematical assertion, as opposed to
    /// input the operation cannot accept.
    pub fn is_assertion_failure(&self) -> bool {
        matches!(
            self.root(),
            Error::NoSystemMatches(_) | Error::Verification(_) | Error::Inconsistent(_)
        )
    }

    /// The innermost error, looking through [`Error::Stage`] wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn in_stage(self, stage: &str) -> Error {
        Error::Stage { stage: stage.to_string(), source: Box::new(self) }
    }
}

/// Attaches a stage name to the error of a [`Result`].
pub trait StageExt<T> {
    fn stage(self, stage: &str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &str) -> Result<T> {
        self.map_err(|e| e.in_stage(stage))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
