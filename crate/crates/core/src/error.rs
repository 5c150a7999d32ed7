use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("horizon mismatch: expected {expected}, found {found}")]
    HorizonMismatch { expected: usize, found: usize },

    #[error("horizon must be at least 1")]
    ZeroHorizon,

    #[error("sample space has no outcomes")]
    EmptySampleSpace,

    #[error("duplicate outcome id {0:?}")]
    DuplicateOutcome(String),

    #[error("unknown outcome id {0:?}")]
    UnknownOutcome(String),

    #[error("probability of outcome {0:?} must be strictly positive")]
    NonPositiveProbability(String),

    #[error("probabilities must sum to 1 (got {0})")]
    ProbabilitySum(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("{name}: partition at t={t} does not refine partition at t={prev}", prev = t - 1)]
    NotRefining { name: String, t: usize },

    #[error("G_t is not contained in F_t at t={0}")]
    InformationNotNested(usize),

    #[error("{name} not {filtration}-adapted at t={t}")]
    NotAdapted {
        name: String,
        filtration: String,
        t: usize,
    },

    #[error("process {name} has wrong shape: {detail}")]
    ProcessShape { name: String, detail: String },

    #[error("stopping time value {value} out of range [0, {horizon}]")]
    TimeOutOfRange { value: usize, horizon: usize },

    #[error("{name} is not a stopping time of {filtration}")]
    NotStoppingTime { name: String, filtration: String },

    #[error("conditioning cell at index {cell} has zero mass")]
    ZeroMassCell { cell: usize },

    #[error("conditioning event has zero probability")]
    NullEvent,

    #[error("envelope is not constant on the atom of G_{t} cell {cell} inside {{tau > t}}")]
    AtomNotCollapsed { t: usize, cell: usize },

    #[error("construction identity violated: {0}")]
    ConstructionInvariant(String),

    #[error("fixpoint not reached within {0} iterations")]
    IterationBound(usize),

    #[error("epsilon must be strictly positive")]
    NonPositiveEpsilon,

    #[error("instance too large for exhaustive verification: {count} strategies exceeds cap {cap}")]
    InstanceTooLarge { count: String, cap: u64 },

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("malformed file: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
