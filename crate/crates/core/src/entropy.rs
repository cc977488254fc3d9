//! Metric and topological entropy partial sums (natural logarithm).

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::FrequencyMeasure;
use crate::substitution::{is_primitive, SubstitutionRule};
use crate::words::abelianise;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Metric,
    Topological,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Metric => "metric",
            Flavor::Topological => "topological",
        })
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "metric" => Ok(Flavor::Metric),
            "topological" => Ok(Flavor::Topological),
            _ => Err(Error::InvalidArgument(format!("unknown entropy flavor {s:?}"))),
        }
    }
}

/// `(n, hₙ)` for `n = 1..=max_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropySeries {
    pub flavor: Flavor,
    pub values: Vec<(usize, f64)>,
}

/// `hₙ = −(1/n) Σ R^(n)_w log R^(n)_w` over legal words of length `n`.
pub fn metric_entropy_partial(fm: &FrequencyMeasure, n: usize) -> Result<f64> {
    let level = fm.level(n)?;
    let sum: f64 = level
        .right()
        .iter()
        .filter(|&&r| r > 0.0)
        .map(|&r| r * r.ln())
        .sum();
    Ok(-sum / n as f64)
}

/// `log(card ℒⁿ) / n`.
pub fn topological_entropy_partial(fm: &FrequencyMeasure, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("word length must be at least 1".into()));
    }
    let count = fm.language(n)?.words(n).len();
    Ok((count as f64).ln() / n as f64)
}

pub fn entropy_series(fm: &FrequencyMeasure, flavor: Flavor, max_n: usize) -> Result<EntropySeries> {
    // one language table for the whole series
    fm.language(max_n)?;
    let values = (1..=max_n)
        .map(|n| {
            let h = match flavor {
                Flavor::Metric => metric_entropy_partial(fm, n)?,
                Flavor::Topological => topological_entropy_partial(fm, n)?,
            };
            Ok((n, h))
        })
        .collect::<Result<_>>()?;
    Ok(EntropySeries { flavor, values })
}

/// Partial sums of both flavors at one word length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyComparison {
    pub n: usize,
    pub metric: f64,
    pub topological: f64,
}

/// Membership in the class where every letter has the same list of `count` images,
/// all of length `length` and with equal letter counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxEntropyReport {
    pub qualifies: bool,
    /// Common image length `N`.
    pub length: Option<usize>,
    /// Number of images `ℓ`.
    pub count: Option<usize>,
    pub uniform: bool,
    /// `(1/N) log ℓ` for qualifying rules with uniform probabilities.
    pub predicted: Option<f64>,
    pub comparison: Option<EntropyComparison>,
}

/// Default word length for the comparison attached to qualifying uniform rules.
pub const MAX_ENTROPY_DEPTH: usize = 12;

pub fn max_entropy_class_check(rule: &SubstitutionRule) -> Result<MaxEntropyReport> {
    max_entropy_class_check_at(rule, MAX_ENTROPY_DEPTH)
}

/// As [`max_entropy_class_check`], comparing partial sums at word length `depth`.
pub fn max_entropy_class_check_at(rule: &SubstitutionRule, depth: usize) -> Result<MaxEntropyReport> {
    let not_qualifying = MaxEntropyReport {
        qualifies: false,
        length: None,
        count: None,
        uniform: false,
        predicted: None,
        comparison: None,
    };
    let mut letters = rule.alphabet().letters();
    let first = letters.next().expect("validated rules have letters");
    let reference = rule.images(first);
    let same_list = letters.all(|a| {
        let images = rule.images(a);
        images.len() == reference.len()
            && images
                .iter()
                .all(|img| rule.prob(first, img.word.letters()) == Some(&img.prob))
    });
    let length = reference[0].word.len();
    let same_length = reference.iter().all(|img| img.word.len() == length);
    let counts = abelianise(reference[0].word.letters(), rule.size())?;
    let same_counts = reference
        .iter()
        .map(|img| abelianise(img.word.letters(), rule.size()))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|c| c == &counts);
    if !(same_list && same_length && same_counts && is_primitive(rule)) {
        return Ok(not_qualifying);
    }

    let count = reference.len();
    let share = BigRational::new(1.into(), count.into());
    let uniform = reference.iter().all(|img| img.prob == share);
    let (predicted, comparison) = if uniform {
        let fm = FrequencyMeasure::new(rule.clone())?;
        let comparison = EntropyComparison {
            n: depth,
            metric: metric_entropy_partial(&fm, depth)?,
            topological: topological_entropy_partial(&fm, depth)?,
        };
        (Some((count as f64).ln() / length as f64), Some(comparison))
    } else {
        (None, None)
    };
    Ok(MaxEntropyReport {
        qualifies: true,
        length: Some(length),
        count: Some(count),
        uniform,
        predicted,
        comparison,
    })
}
