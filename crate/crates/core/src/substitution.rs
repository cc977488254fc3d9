//! Random substitution rules and their exact probabilistic structure.
//!
//! Everything here is exact: probabilities are [`BigRational`]s, the transition
//! kernel is evaluated by dynamic programming over prefixes of the target word, and
//! iterate distributions are propagated one inflation step at a time.

use std::collections::{BTreeMap, HashSet};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::config::{RawImage, RawRule};
use crate::error::{Error, Result, RuleViolation};
use crate::limits::Limits;
use crate::matrix::RationalMatrix;
use crate::words::{Alphabet, Letter, Word};

/// One possible image of a letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub word: Word,
    pub prob: BigRational,
}

/// A validated random substitution: every letter maps to a finite distribution over
/// nonempty words, with exact positive probabilities summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionRule {
    alphabet: Alphabet,
    images: Vec<Vec<Image>>,
}

impl SubstitutionRule {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn images(&self, a: Letter) -> &[Image] {
        &self.images[a.index()]
    }

    /// `P_a(word)`, or `None` when `word` is not an image of `a`.
    pub fn prob(&self, a: Letter, word: &[Letter]) -> Option<&BigRational> {
        self.images(a)
            .iter()
            .find(|img| img.word.letters() == word)
            .map(|img| &img.prob)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.alphabet.parse(text)
    }

    pub fn render(&self, word: &[Letter]) -> String {
        self.alphabet.render(word)
    }

    /// True when every letter has a single image.
    pub fn is_deterministic(&self) -> bool {
        self.images.iter().all(|imgs| imgs.len() == 1)
    }

    /// Same alphabet and, per letter, the same set of image words.
    pub fn same_supports(&self, other: &SubstitutionRule) -> bool {
        self.alphabet == other.alphabet
            && self.images.iter().zip(&other.images).all(|(x, y)| {
                let xs: HashSet<&Word> = x.iter().map(|i| &i.word).collect();
                let ys: HashSet<&Word> = y.iter().map(|i| &i.word).collect();
                xs == ys
            })
    }

    /// The first letter (in alphabet order) whose image support differs from `other`.
    pub(crate) fn first_support_mismatch(&self, other: &SubstitutionRule) -> Option<String> {
        if self.alphabet != other.alphabet {
            return Some(self.alphabet.symbols().join(","));
        }
        self.alphabet.letters().find_map(|a| {
            let xs: HashSet<&Word> = self.images(a).iter().map(|i| &i.word).collect();
            let ys: HashSet<&Word> = other.images(a).iter().map(|i| &i.word).collect();
            (xs != ys).then(|| self.alphabet.symbol(a).to_string())
        })
    }

    pub fn max_image_len(&self) -> usize {
        self.images
            .iter()
            .flatten()
            .map(|i| i.word.len())
            .max()
            .unwrap_or(0)
    }

    /// Same supports, with each letter's probabilities replaced by `probs(letter, images)`.
    pub fn reweighted(
        &self,
        mut probs: impl FnMut(Letter, &[Image]) -> Vec<BigRational>,
    ) -> Result<SubstitutionRule> {
        let mut raw = self.to_raw();
        for a in self.alphabet.letters() {
            let new = probs(a, self.images(a));
            let entry = raw.rules.get_mut(self.alphabet.symbol(a)).expect("every letter has rules");
            if new.len() != entry.len() {
                return Err(Error::InvalidArgument(format!(
                    "{} probabilities given for {} images of {:?}",
                    new.len(),
                    entry.len(),
                    self.alphabet.symbol(a)
                )));
            }
            for (img, p) in entry.iter_mut().zip(new) {
                img.prob = p.to_string();
            }
        }
        validate_rule(&raw)
    }

    pub fn to_raw(&self) -> RawRule {
        RawRule {
            alphabet: self.alphabet.symbols().to_vec(),
            rules: self
                .alphabet
                .letters()
                .map(|a| {
                    let images = self
                        .images(a)
                        .iter()
                        .map(|img| RawImage {
                            word: self.render(img.word.letters()),
                            prob: img.prob.to_string(),
                        })
                        .collect();
                    (self.alphabet.symbol(a).to_string(), images)
                })
                .collect(),
        }
    }
}

/// Checks every rule invariant and reports all violations at once.
pub fn validate_rule(raw: &RawRule) -> Result<SubstitutionRule> {
    let mut violations = Vec::new();
    if raw.alphabet.is_empty() {
        violations.push(RuleViolation::EmptyAlphabet);
    }
    let mut seen = HashSet::new();
    for s in &raw.alphabet {
        if s.is_empty() {
            violations.push(RuleViolation::EmptySymbol);
        } else if !seen.insert(s.as_str()) {
            violations.push(RuleViolation::DuplicateSymbol(s.clone()));
        }
    }
    if raw.alphabet.len() > 256 {
        return Err(Error::InvalidArgument(format!(
            "alphabets are limited to 256 symbols, got {}",
            raw.alphabet.len()
        )));
    }
    if !violations.is_empty() {
        return Err(Error::InvalidRule(violations));
    }
    let alphabet = Alphabet::from_symbols(raw.alphabet.clone());

    for key in raw.rules.keys() {
        if alphabet.letter(key).is_none() {
            violations.push(RuleViolation::UnknownRuleLetter(key.clone()));
        }
    }

    let mut images = Vec::with_capacity(alphabet.len());
    for symbol in alphabet.symbols() {
        let entries = match raw.rules.get(symbol) {
            Some(entries) if !entries.is_empty() => entries,
            _ => {
                violations.push(RuleViolation::MissingImages(symbol.clone()));
                images.push(Vec::new());
                continue;
            }
        };
        let mut letter_images = Vec::new();
        let mut words = HashSet::new();
        let mut sum = BigRational::zero();
        let mut sum_valid = true;
        for RawImage { word, prob } in entries {
            let parsed_word = if word.is_empty() {
                violations.push(RuleViolation::EmptyImage { letter: symbol.clone() });
                None
            } else {
                match alphabet.parse(word) {
                    Ok(w) => {
                        if !words.insert(w.clone()) {
                            violations.push(RuleViolation::DuplicateImage {
                                letter: symbol.clone(),
                                word: word.clone(),
                            });
                        }
                        Some(w)
                    }
                    Err(_) => {
                        violations.push(RuleViolation::UnknownLetterInImage {
                            letter: symbol.clone(),
                            word: word.clone(),
                        });
                        None
                    }
                }
            };
            let parsed_prob = match parse_probability(prob) {
                Some(p) if p <= BigRational::zero() => {
                    violations.push(RuleViolation::NonPositiveProbability {
                        letter: symbol.clone(),
                        word: word.clone(),
                        prob: p.to_string(),
                    });
                    Some(p)
                }
                Some(p) if p > BigRational::one() => {
                    violations.push(RuleViolation::ProbabilityAboveOne {
                        letter: symbol.clone(),
                        word: word.clone(),
                        prob: p.to_string(),
                    });
                    Some(p)
                }
                Some(p) => Some(p),
                None => {
                    violations.push(RuleViolation::MalformedProbability {
                        letter: symbol.clone(),
                        text: prob.clone(),
                    });
                    sum_valid = false;
                    None
                }
            };
            if let Some(p) = &parsed_prob {
                sum += p;
            }
            if let (Some(word), Some(prob)) = (parsed_word, parsed_prob) {
                letter_images.push(Image { word, prob });
            }
        }
        if sum_valid && !sum.is_one() {
            violations.push(RuleViolation::ProbabilitySum {
                letter: symbol.clone(),
                sum: sum.to_string(),
            });
        }
        images.push(letter_images);
    }

    if violations.is_empty() {
        Ok(SubstitutionRule { alphabet, images })
    } else {
        Err(Error::InvalidRule(violations))
    }
}

/// Accepts `"num/den"` or an integer.
pub fn parse_probability(text: &str) -> Option<BigRational> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// `P(u, v)`: the probability that the independent images of the letters of `u`
/// concatenate to `v`.
///
/// `reach[j]` holds the probability that the images of the letters processed so far
/// spell exactly `v[..j]`.
pub fn kernel(rule: &SubstitutionRule, u: &[Letter], v: &[Letter]) -> BigRational {
    let mut reach = vec![BigRational::zero(); v.len() + 1];
    reach[0] = BigRational::one();
    for &a in u {
        let mut next = vec![BigRational::zero(); v.len() + 1];
        for (j, mass) in reach.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            for img in rule.images(a) {
                let end = j + img.word.len();
                if end <= v.len() && &v[j..end] == img.word.letters() {
                    next[end] += mass * &img.prob;
                }
            }
        }
        reach = next;
    }
    reach.swap_remove(v.len())
}

/// Exact law of the word `ϑⁿ(u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterateDistribution {
    pub n: usize,
    pub source: Word,
    pub entries: BTreeMap<Word, BigRational>,
}

impl IterateDistribution {
    pub fn prob(&self, w: &Word) -> BigRational {
        self.entries.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.entries.values().sum()
    }
}

/// Law of the one-step image of `u`, refusing supports larger than `limit`.
pub fn image_distribution(
    rule: &SubstitutionRule,
    u: &[Letter],
    limit: usize,
) -> Result<BTreeMap<Word, BigRational>> {
    let mut dist: BTreeMap<Vec<Letter>, BigRational> = BTreeMap::from([(Vec::new(), BigRational::one())]);
    for &a in u {
        let mut next = BTreeMap::new();
        for (prefix, p) in &dist {
            for img in rule.images(a) {
                let mut w = prefix.clone();
                w.extend_from_slice(img.word.letters());
                *next.entry(w).or_insert_with(BigRational::zero) += p * &img.prob;
            }
        }
        if next.len() > limit {
            return Err(Error::GuardExceeded {
                what: "iterate support",
                size: next.len(),
                limit,
            });
        }
        dist = next;
    }
    Ok(dist.into_iter().map(|(w, p)| (Word::new(w), p)).collect())
}

pub fn iterate_distribution(rule: &SubstitutionRule, u: &Word, n: usize) -> Result<IterateDistribution> {
    iterate_distribution_with_limit(rule, u, n, Limits::from_env().iterate_support)
}

/// Exact law of `ϑⁿ(u)`, propagated one kernel step at a time.
pub fn iterate_distribution_with_limit(
    rule: &SubstitutionRule,
    u: &Word,
    n: usize,
    limit: usize,
) -> Result<IterateDistribution> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut entries = BTreeMap::from([(u.clone(), BigRational::one())]);
    for _ in 0..n {
        let mut next: BTreeMap<Word, BigRational> = BTreeMap::new();
        for (w, p) in &entries {
            for (image, q) in image_distribution(rule, w.letters(), limit)? {
                *next.entry(image).or_insert_with(BigRational::zero) += p * q;
            }
            if next.len() > limit {
                return Err(Error::GuardExceeded {
                    what: "iterate support",
                    size: next.len(),
                    limit,
                });
            }
        }
        entries = next;
    }
    Ok(IterateDistribution {
        n,
        source: u.clone(),
        entries,
    })
}

/// Mean matrix indexed by `labels`: letters for the plain matrix, legal
/// `ell`-words for induced ones. Entry `(w, u)` is the expected number of
/// occurrences of `w` in the image of `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanMatrix {
    pub ell: usize,
    pub labels: Vec<Word>,
    pub matrix: RationalMatrix,
}

impl MeanMatrix {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.labels.binary_search(w).ok()
    }

    pub fn entry(&self, row: &Word, col: &Word) -> Option<&BigRational> {
        Some(self.matrix.get(self.index_of(row)?, self.index_of(col)?))
    }
}

/// `(M)_{ab} = Σ p·|w|_a` over the images `(w, p)` of `b`.
pub fn mean_matrix(rule: &SubstitutionRule) -> MeanMatrix {
    let m = rule.size();
    let mut matrix = RationalMatrix::zeros(m);
    for b in rule.alphabet().letters() {
        for img in rule.images(b) {
            for &a in img.word.letters() {
                *matrix.get_mut(a.index(), b.index()) += &img.prob;
            }
        }
    }
    MeanMatrix {
        ell: 1,
        labels: rule.alphabet().letters().map(|a| Word::new(vec![a])).collect(),
        matrix,
    }
}

/// Witness exponent `k` with `M^k > 0`, or `None` if the rule is not primitive.
pub fn primitivity_exponent(rule: &SubstitutionRule) -> Option<usize> {
    mean_matrix(rule).matrix.primitivity_exponent()
}

pub fn is_primitive(rule: &SubstitutionRule) -> bool {
    primitivity_exponent(rule).is_some()
}

/// Some image word is longer than one letter.
pub fn is_expanding(rule: &SubstitutionRule) -> bool {
    rule.max_image_len() > 1
}
