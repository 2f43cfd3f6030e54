use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An insertion or query would materialize the deck beyond its cap.
    #[error("position {requested} exceeds the materialization cap {cap}")]
    MaterializationCap { requested: u64, cap: u64 },

    /// A run exhausted its step budget before reaching its target.
    #[error("step budget of {budget} exhausted before the target was reached")]
    StepBudget { budget: u64 },

    /// A table schedule with `extend = error` was asked for a position past its data.
    #[error("schedule table has no entry for view count {k}")]
    ScheduleExhausted { k: u64 },

    /// A schedule descriptor failed to parse or validate.
    #[error("invalid schedule descriptor: {0}")]
    InvalidDescriptor(String),

    /// A counting sequence cannot be inverted to a viewing sequence.
    #[error("counting sequence is inconsistent at index {index}")]
    InvalidCountingSequence { index: usize },

    /// A deck of times fails the structural requirements for decoding.
    #[error("invalid deck of times: {0}")]
    InvalidTimesDeck(String),

    /// An operation needs timetable data past what was recorded.
    #[error("timetable covers times up to {have} but {needed} is required")]
    IncompleteTimeTable { needed: u64, have: u64 },

    /// Full viewing history was requested for a card outside the tracked range.
    #[error("card {card} is beyond the tracked-row limit {limit}")]
    UntrackedCard { card: u64, limit: u64 },

    /// A user-supplied permutation rule is not a permutation.
    #[error("invalid permutation rule: {0}")]
    InvalidSigma(String),

    /// A check was asked to run on a schedule it does not apply to.
    #[error("schedule unsuitable for this check: {0}")]
    UnsuitableSchedule(String),
}

pub type Result<T> = std::result::Result<T, Error>;
