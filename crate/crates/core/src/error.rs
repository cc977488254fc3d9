use std::fmt;

use thiserror::Error;

/// A single invariant broken by a raw rule description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleViolation {
    EmptyAlphabet,
    DuplicateSymbol(String),
    EmptySymbol,
    /// A key of the rule table that is not an alphabet symbol.
    UnknownRuleLetter(String),
    /// An alphabet symbol without any image.
    MissingImages(String),
    EmptyImage { letter: String },
    UnknownLetterInImage { letter: String, word: String },
    DuplicateImage { letter: String, word: String },
    MalformedProbability { letter: String, text: String },
    NonPositiveProbability { letter: String, word: String, prob: String },
    ProbabilityAboveOne { letter: String, word: String, prob: String },
    ProbabilitySum { letter: String, sum: String },
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleViolation::EmptyAlphabet => write!(f, "alphabet is empty"),
            RuleViolation::DuplicateSymbol(s) => write!(f, "symbol {s:?} declared twice"),
            RuleViolation::EmptySymbol => write!(f, "empty symbol in alphabet"),
            RuleViolation::UnknownRuleLetter(s) => {
                write!(f, "rule given for {s:?}, which is not in the alphabet")
            }
            RuleViolation::MissingImages(s) => write!(f, "letter {s:?} has no images"),
            RuleViolation::EmptyImage { letter } => write!(f, "letter {letter:?} has an empty image"),
            RuleViolation::UnknownLetterInImage { letter, word } => {
                write!(f, "image {word:?} of {letter:?} uses a letter outside the alphabet")
            }
            RuleViolation::DuplicateImage { letter, word } => {
                write!(f, "image {word:?} of {letter:?} listed more than once")
            }
            RuleViolation::MalformedProbability { letter, text } => {
                write!(f, "probability {text:?} for {letter:?} is not a rational number")
            }
            RuleViolation::NonPositiveProbability { letter, word, prob } => {
                write!(f, "image {word:?} of {letter:?} has non-positive probability {prob}")
            }
            RuleViolation::ProbabilityAboveOne { letter, word, prob } => {
                write!(f, "image {word:?} of {letter:?} has probability {prob} > 1")
            }
            RuleViolation::ProbabilitySum { letter, sum } => {
                write!(f, "probabilities of {letter:?} sum to {sum}, not 1")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid substitution rule: {}", join(.0))]
    InvalidRule(Vec<RuleViolation>),
    #[error("empty word")]
    EmptyWord,
    #[error("cannot read {0:?} as a word over the alphabet")]
    UnknownSymbol(String),
    #[error("the substitution is not primitive")]
    NotPrimitive,
    #[error("the substitution is not expanding; only window length 1 is supported (got {ell})")]
    NotExpanding { ell: usize },
    #[error("resource guard exceeded: {what} needs {size}, limit is {limit}")]
    GuardExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("word of length {len} is shorter than the window length {ell}")]
    WordTooShort { len: usize, ell: usize },
    #[error("{0:?} is not a legal word")]
    IllegalWord(String),
    #[error("perturbed rule changes the image support of letter {0:?}")]
    SupportMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by a resource limit rather than bad input.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded { .. })
    }
}

fn join(violations: &[RuleViolation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
