//! JSON rule files.
//!
//! ```json
//! {"alphabet": ["a", "b"],
//!  "rules": {"a": [{"word": "ab", "prob": "1/2"}, {"word": "ba", "prob": "1/2"}],
//!            "b": [{"word": "a", "prob": "1"}]}}
//! ```
//!
//! Probabilities are rational strings so that symbolic parameters survive exactly.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::substitution::{validate_rule, SubstitutionRule};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawImage {
    pub word: String,
    pub prob: String,
}

/// Unvalidated rule as read from a config file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRule {
    pub alphabet: Vec<String>,
    pub rules: BTreeMap<String, Vec<RawImage>>,
}

impl RawRule {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("raw rules always serialise")
    }
}

/// Reads and validates a rule file.
pub fn load_rule(path: impl AsRef<Path>) -> Result<SubstitutionRule> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    validate_rule(&RawRule::from_json(&text)?)
}
