//! Error taxonomy shared by every module in the crate.

use thiserror::Error;

/// Errors surfaced by expansion systems, set builders and measure engines.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input (bad digit, bad probability vector, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two objects built over different alphabets were combined.
    #[error("alphabet mismatch: expected base {expected}, got base {got}")]
    AlphabetMismatch { expected: u32, got: u32 },

    /// A horizon was requested past the end of the available digit stream.
    #[error("horizon {horizon} exceeds available digits ({available})")]
    HorizonExceedsSequence { horizon: usize, available: usize },

    /// The greedy expansion of 1 did not hit zero within the probe budget.
    #[error("expansion of 1 did not terminate within {max_steps} digits")]
    NonTerminating { max_steps: usize },

    /// A digit word violates the admissibility condition of the system.
    #[error("inadmissible word at digit index {index}")]
    Inadmissible { index: usize },

    /// The requested cylinder is empty.
    #[error("empty cylinder for word {word}")]
    EmptyCylinder { word: String },

    /// An enumeration or search exceeded its node budget.
    #[error("resource budget exceeded: {explored} nodes explored (budget {budget}); {context}")]
    ResourceBudget {
        explored: u64,
        budget: u64,
        context: String,
    },

    /// Sign determination could not be completed within the refinement cap.
    #[error("precision exhausted while deciding {context} (index {index})")]
    PrecisionExhausted { context: String, index: usize },

    /// A dimension oracle refused the input (inconsistent frequency vector).
    #[error("oracle unavailable: {0}")]
    OracleUnavailable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
