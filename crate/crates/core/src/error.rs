use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input is empty")]
    EmptyFile,
    #[error("line {line}: {message}")]
    MalformedRow { line: u64, message: String },
    #[error("line {line}: duplicate record ({subject}, {rater}, {category})")]
    DuplicateRecord {
        line: u64,
        subject: String,
        rater: String,
        category: String,
    },
    #[error("line {line}: duplicate roster pair ({subject}, {rater})")]
    DuplicatePair {
        line: u64,
        subject: String,
        rater: String,
    },
    #[error("record ({subject}, {rater}) is not in the roster")]
    RecordOutsideRoster { subject: String, rater: String },
    #[error("unknown category {0:?}")]
    UnknownCategory(String),
    #[error("duplicate category {0:?}")]
    DuplicateCategory(String),
    #[error("invalid dataset: {0}")]
    InvalidTensor(String),

    #[error("malformed predicate at {path}: {message}")]
    MalformedPredicate { path: String, message: String },
    #[error("rule for {category:?} references unknown category {reference:?}")]
    UnknownCategoryReference { category: String, reference: String },
    #[error("cyclic category dependency: {}", .0.join(" -> "))]
    CyclicDependency(Vec<String>),
    #[error(
        "subject {subject:?}: rater {rater:?} selected {category:?} although it was not available"
    )]
    HierarchyViolation {
        subject: String,
        rater: String,
        category: String,
    },

    #[error("invalid counts: x = {selected} exceeds s = {possible}")]
    InvalidCounts { selected: u32, possible: u32 },
    #[error("category {0} has no rater opportunities")]
    ZeroOpportunity(usize),
    #[error("overall kappa is undefined (zero denominator)")]
    UndefinedKappa,
    #[error("subject {0:?} does not have exactly one selection per rater")]
    NotMutuallyExclusive(String),
    #[error("the number of raters varies across subjects")]
    VaryingRaters,
    #[error("all scores are zero")]
    AllZeroScores,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("method needs exactly two raters, found {0}")]
    NotTwoRaters(usize),
    #[error("cell index {index} outside 1..={max}")]
    OutOfRange { index: usize, max: usize },
    #[error("no rater pair yields a defined agreement value")]
    NoValidPairs,

    #[error("bootstrap needs at least 100 replicates, got {0}")]
    TooFewReplicates(usize),
    #[error("every bootstrap replicate produced an undefined kappa")]
    AllReplicatesDegenerate,
    #[error("confidence must lie in (0, 1), got {0}")]
    InvalidConfidence(f64),
}
