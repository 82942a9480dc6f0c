use thiserror::Error;

use crate::schedule::LuckyRange;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("question count {0} is outside 0..=13")]
    QuestionCount(usize),
    #[error("probability {0} is outside [0, 1]")]
    Probability(f64),
    #[error("category counts sum to {0}, expected 13")]
    CategoryTotal(usize),
    #[error("expected 13 per-question probabilities, got {0}")]
    ProbabilityCount(usize),
    #[error("per-question probability {0} is outside [0.5, 1]")]
    QuestionProbability(f64),
    #[error("probability mass is invalid: {0}")]
    InvalidMass(String),
    #[error("empty probability vector")]
    EmptyVector,
    #[error("mean {mean} is outside [0, {n}]")]
    MeanOutOfRange { mean: f64, n: usize },
    #[error("Lucky Number {number} is not inside Lucky Range {range}")]
    NumberOutsideRange { range: LuckyRange, number: u8 },
    #[error("Lucky Range {0} requires a Lucky Number")]
    MissingNumber(LuckyRange),
    #[error("Lucky Range 13 does not take a Lucky Number")]
    NumberWithThirteen,
    #[error("unknown Lucky Range '{0}'")]
    UnknownRange(String),
    #[error("invalid prize schedule: {0}")]
    Schedule(String),
    #[error("all 13 questions have already been revealed")]
    PoolExhausted,
    #[error("no unrevealed question matches {0}")]
    QuestionUnavailable(String),
    #[error("offer {0} must be a non-negative amount")]
    NegativeOffer(f64),
    #[error("game is fully revealed, no offer can be evaluated")]
    GameComplete,
    #[error("offer after reveal {after} but only {available} reveals recorded")]
    OfferIndex { after: usize, available: usize },
    #[error("invalid utility: {0}")]
    Utility(String),
    #[error("invalid simulation config: {0}")]
    Config(String),
    #[error("invalid population model: {0}")]
    Population(String),
    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
