use alloc::string::String;
use core::fmt;

use crate::sim::ActionId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A goal literal or state access named a variable past the end of the state.
    VariableOutOfRange { index: usize, len: usize },
    /// Two goal literals constrain the same variable.
    DuplicateGoalVariable(usize),
    /// Two states that must be compared have different lengths.
    LengthMismatch { left: usize, right: usize },
    /// Step `position` of a plan or macro is not applicable in the state it meets.
    NotApplicable { position: usize, action: ActionId },
    /// An action id outside the owning domain's action table.
    UnknownAction(ActionId),
    /// A primitive sequence cannot be chained into a single macro.
    Unchainable { position: usize, reason: String },
    /// A macro was empty, or its stored effect disagrees with its primitives.
    InvalidMacro { index: usize, reason: String },
    /// Invalid parameters for learning, generation or search.
    Config(String),
    /// A rejection sampler ran out of attempts.
    GenerationFailed { attempts: usize, what: String },
    /// A state space too large to enumerate.
    TooLarge { states: u64, limit: u64 },
    /// Malformed text input; `line` is 1-based.
    Parse { line: usize, message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::VariableOutOfRange { index, len } => {
                write!(f, "variable index {index} out of range for state of length {len}")
            }
            Error::DuplicateGoalVariable(v) => write!(f, "goal constrains variable {v} twice"),
            Error::LengthMismatch { left, right } => {
                write!(f, "state length mismatch: {left} vs {right}")
            }
            Error::NotApplicable { position, action } => {
                write!(f, "action {} not applicable at step {position}", action.0)
            }
            Error::UnknownAction(a) => write!(f, "unknown action id {}", a.0),
            Error::Unchainable { position, reason } => {
                write!(f, "sequence cannot be chained at step {position}: {reason}")
            }
            Error::InvalidMacro { index, reason } => write!(f, "invalid macro #{index}: {reason}"),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::GenerationFailed { attempts, what } => {
                write!(f, "failed to generate {what} after {attempts} attempts")
            }
            Error::TooLarge { states, limit } => {
                write!(f, "state space of {states} states exceeds enumeration limit {limit}")
            }
            Error::Parse { line, message } => write!(f, "line {line}: {message}"),
        }
    }
}

impl core::error::Error for Error {}
