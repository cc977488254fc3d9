//! Resource guards shared by the enumeration-heavy operations.

/// Environment variable that overrides every guard with a single value.
pub const GUARD_ENV: &str = "STOCHSUB_GUARD_LIMIT";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum support size of an exact iterate distribution.
    pub iterate_support: usize,
    /// Maximum number of joint image realisations per induced-matrix column,
    /// and maximum number of legal words held by a language table.
    pub enumeration: usize,
    /// Maximum number of letters in one sampled word.
    pub letter_budget: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            iterate_support: 1_000_000,
            enumeration: 10_000_000,
            letter_budget: 100_000_000,
        }
    }
}

impl Limits {
    /// All guards set to the same value.
    pub fn uniform(limit: usize) -> Self {
        Limits {
            iterate_support: limit,
            enumeration: limit,
            letter_budget: limit,
        }
    }

    /// Defaults, or [`Limits::uniform`] with the value of `STOCHSUB_GUARD_LIMIT` when it is set
    /// to a positive integer.
    pub fn from_env() -> Self {
        std::env::var(GUARD_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0)
            .map(Limits::uniform)
            .unwrap_or_default()
    }
}
