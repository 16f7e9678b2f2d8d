use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An exhaustive search visited more distinct states than allowed.
    #[error("budget exceeded after exploring {explored} states (limit {limit})")]
    BudgetExceeded { explored: u64, limit: u64 },

    /// A play grew past the configured length cap.
    #[error("play length exceeded the cap of {limit} moves")]
    PlayTooLong { limit: usize },

    /// The input lies outside the hypotheses of the requested bound.
    #[error("outside hypotheses: {0}")]
    Hypothesis(String),

    /// A precondition of a transformation or query does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A derivation grew past the configured node or numeral limits.
    #[error("derivation too large: {0}")]
    DerivationTooLarge(String),

    /// A pointer sequence is not a well-formed (visible) play.
    #[error("invalid play: {0}")]
    InvalidPlay(String),

    #[error("type error: {0}")]
    Type(String),

    #[error("not a game situation: {0}")]
    NotGameSituation(String),
}
