//! Legal words of a primitive random substitution.
//!
//! The table of legal words of length `<= ell` is the smallest set that contains the
//! alphabet and is closed under "take a subword of length `<= ell` of some realisation
//! of the set-valued image of a member". Any such subword of an image of a legal
//! word already lies in the image of its minimal covering subword, which has length
//! `<= ell` and is legal, so it suffices to inflate table members and keep the
//! subwords that span the images of all their letters. The closure is the union
//! over all iteration depths, which is exactly the language.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::substitution::{is_primitive, SubstitutionRule};
use crate::words::{Letter, Word};

/// Legal words of every length `1..=max_ell`, each length sorted lexicographically
/// by letter code.
#[derive(Debug, Clone)]
pub struct LanguageTable {
    by_len: Vec<Vec<Word>>,
    index: Vec<HashMap<Word, usize>>,
}

impl LanguageTable {
    pub fn max_ell(&self) -> usize {
        self.by_len.len()
    }

    /// Legal words of length `ell`; empty beyond the table.
    pub fn words(&self, ell: usize) -> &[Word] {
        match ell {
            0 => &[],
            _ => self.by_len.get(ell - 1).map(Vec::as_slice).unwrap_or(&[]),
        }
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w.len().checked_sub(1)?)?.get(w).copied()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.index_of(w).is_some()
    }
}

pub fn language_table(rule: &SubstitutionRule, max_ell: usize) -> Result<LanguageTable> {
    language_table_with_limits(rule, max_ell, &Limits::from_env())
}

pub fn language_table_with_limits(
    rule: &SubstitutionRule,
    max_ell: usize,
    limits: &Limits,
) -> Result<LanguageTable> {
    if max_ell == 0 {
        return Err(Error::InvalidArgument("window length must be at least 1".into()));
    }
    if !is_primitive(rule) {
        return Err(Error::NotPrimitive);
    }
    let mut seen: HashSet<Vec<Letter>> = HashSet::new();
    let mut queue = VecDeque::new();
    for a in rule.alphabet().letters() {
        seen.insert(vec![a]);
        queue.push_back(vec![a]);
    }
    let mut found = Vec::new();
    while let Some(w) = queue.pop_front() {
        found.clear();
        spanning_subwords(rule, &w, max_ell, &mut found);
        for x in found.drain(..) {
            if !seen.contains(&x) {
                seen.insert(x.clone());
                queue.push_back(x);
            }
        }
        if seen.len() > limits.enumeration {
            return Err(Error::GuardExceeded {
                what: "language table",
                size: seen.len(),
                limit: limits.enumeration,
            });
        }
    }

    let mut by_len = vec![Vec::new(); max_ell];
    for w in seen {
        by_len[w.len() - 1].push(Word::new(w));
    }
    for words in &mut by_len {
        words.sort_unstable();
    }
    let index = by_len
        .iter()
        .map(|words| words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect())
        .collect();
    Ok(LanguageTable { by_len, index })
}

/// Legal words of length `ell`, in table order.
pub fn legal_words(rule: &SubstitutionRule, ell: usize) -> Result<Vec<Word>> {
    Ok(language_table(rule, ell)?.words(ell).to_vec())
}

/// Subwords of length `<= max_len` of realisations of the image of `w` that start
/// inside the image of `w[0]` and end inside the image of the last letter.
fn spanning_subwords(rule: &SubstitutionRule, w: &[Letter], max_len: usize, out: &mut Vec<Vec<Letter>>) {
    if w.len() == 1 {
        for img in rule.images(w[0]) {
            let letters = img.word.letters();
            for s in 0..letters.len() {
                for e in s + 1..=letters.len().min(s + max_len) {
                    out.push(letters[s..e].to_vec());
                }
            }
        }
        return;
    }
    let mut middle = Vec::new();
    extend_middle(rule, w, 1, max_len, &mut middle, out);
}

fn extend_middle(
    rule: &SubstitutionRule,
    w: &[Letter],
    pos: usize,
    max_len: usize,
    middle: &mut Vec<Letter>,
    out: &mut Vec<Vec<Letter>>,
) {
    // at least one letter from each end image
    if middle.len() + 2 > max_len {
        return;
    }
    let last = w.len() - 1;
    if pos < last {
        for img in rule.images(w[pos]) {
            let mark = middle.len();
            middle.extend_from_slice(img.word.letters());
            extend_middle(rule, w, pos + 1, max_len, middle, out);
            middle.truncate(mark);
        }
        return;
    }
    let room = max_len - middle.len();
    for first in rule.images(w[0]) {
        let first = first.word.letters();
        for s in (0..first.len()).rev() {
            let head = &first[s..];
            if head.len() + 1 > room {
                break;
            }
            for tail in rule.images(w[last]) {
                let tail = tail.word.letters();
                for e in 1..=tail.len().min(room - head.len()) {
                    let mut x = Vec::with_capacity(head.len() + middle.len() + e);
                    x.extend_from_slice(head);
                    x.extend_from_slice(middle);
                    x.extend_from_slice(&tail[..e]);
                    out.push(x);
                }
            }
        }
    }
}

/// Sliding windows of one underlying word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollaredWord {
    pub ell: usize,
    pub windows: Vec<Word>,
}

/// The `|u| - ell + 1` windows of length `ell` of `u`.
pub fn collar(u: &Word, ell: usize) -> Result<CollaredWord> {
    if ell == 0 {
        return Err(Error::InvalidArgument("window length must be at least 1".into()));
    }
    if u.len() < ell {
        return Err(Error::WordTooShort { len: u.len(), ell });
    }
    Ok(CollaredWord {
        ell,
        windows: u.windows(ell).map(Word::from).collect(),
    })
}
