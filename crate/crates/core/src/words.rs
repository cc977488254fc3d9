//! Finite words over an interned alphabet.
//!
//! Symbols are interned to small integer codes when a rule is loaded, so every
//! hot loop in the crate compares bytes. [`Alphabet`] converts between codes and
//! the user-facing symbol strings.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Interned alphabet symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u8);

impl Letter {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Immutable finite word. Ordering is lexicographic on letter codes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_codes(codes: &[u8]) -> Self {
        Word(codes.iter().map(|&c| Letter(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    /// The subword `u_[k,m]` with 1-based inclusive bounds, or `None` outside
    /// `1 <= k <= m <= |u|`.
    pub fn subword(&self, k: usize, m: usize) -> Option<Word> {
        if k == 0 || k > m || m > self.len() {
            return None;
        }
        Some(Word(self.0[k - 1..m].to_vec()))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Sliding windows of length `ell`, left to right. Panics if `ell == 0`.
    pub fn windows(&self, ell: usize) -> std::slice::Windows<'_, Letter> {
        self.0.windows(ell)
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

impl From<&[Letter]> for Word {
    fn from(letters: &[Letter]) -> Self {
        Word(letters.to_vec())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let codes: Vec<u8> = self.0.iter().map(|l| l.0).collect();
        write!(f, "Word{codes:?}")
    }
}

/// `|u|_v`: the number of (possibly overlapping) occurrences of `v` in `u`.
pub fn count_occurrences(u: &[Letter], v: &[Letter]) -> usize {
    if v.is_empty() || v.len() > u.len() {
        return 0;
    }
    u.windows(v.len()).filter(|w| *w == v).count()
}

/// Letter counts of `u`, indexed by letter code, over an alphabet of `size` letters.
pub fn abelianise(u: &[Letter], size: usize) -> Result<Vec<usize>> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut counts = vec![0; size];
    for l in u {
        counts[l.index()] += 1;
    }
    Ok(counts)
}

/// Ordered set of symbols with their interned codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, Letter>,
}

impl Alphabet {
    /// Symbols must be nonempty and distinct; at most 256 are supported.
    pub(crate) fn from_symbols(symbols: Vec<String>) -> Self {
        let index = symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), Letter(i as u8)))
            .collect();
        Alphabet { symbols, index }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.symbols.len()).map(|i| Letter(i as u8))
    }

    pub fn letter(&self, symbol: &str) -> Option<Letter> {
        self.index.get(symbol).copied()
    }

    pub fn symbol(&self, letter: Letter) -> &str {
        &self.symbols[letter.index()]
    }

    /// Tokenises `text` by greedy longest match against the symbols.
    pub fn parse(&self, text: &str) -> Result<Word> {
        let longest = self.symbols.iter().map(String::len).max().unwrap_or(0);
        let mut letters = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let found = (1..=longest.min(rest.len()))
                .rev()
                .filter(|&n| rest.is_char_boundary(n))
                .find_map(|n| self.index.get(&rest[..n]).map(|&l| (l, n)));
            match found {
                Some((l, n)) => {
                    letters.push(l);
                    rest = &rest[n..];
                }
                None => return Err(Error::UnknownSymbol(text.to_string())),
            }
        }
        Ok(Word(letters))
    }

    pub fn render(&self, word: &[Letter]) -> String {
        word.iter().map(|&l| self.symbol(l)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        Alphabet::from_symbols(vec!["a".into(), "b".into()])
    }

    fn w(s: &str) -> Word {
        ab().parse(s).unwrap()
    }

    #[test]
    fn occurrence_counts() {
        assert_eq!(count_occurrences(w("abba").letters(), w("bb").letters()), 1);
        assert_eq!(count_occurrences(w("aba").letters(), w("a").letters()), 2);
        assert_eq!(count_occurrences(w("a").letters(), w("ab").letters()), 0);
        assert_eq!(count_occurrences(w("aaa").letters(), w("aa").letters()), 2);
    }

    #[test]
    fn abelianisation() {
        assert_eq!(abelianise(w("abba").letters(), 2).unwrap(), vec![2, 2]);
        assert_eq!(abelianise(w("a").letters(), 2).unwrap(), vec![1, 0]);
        // the two realisations of the random Fibonacci image of a
        assert_eq!(
            abelianise(w("ab").letters(), 2).unwrap(),
            abelianise(w("ba").letters(), 2).unwrap()
        );
        assert!(matches!(abelianise(&[], 2), Err(Error::EmptyWord)));
    }

    #[test]
    fn subword_bounds() {
        let u = w("abba");
        assert_eq!(u.subword(2, 3), Some(w("bb")));
        assert_eq!(u.subword(1, 4), Some(u.clone()));
        assert_eq!(u.subword(0, 1), None);
        assert_eq!(u.subword(3, 2), None);
        assert_eq!(u.subword(2, 5), None);
    }

    #[test]
    fn parse_multichar_symbols() {
        let alpha = Alphabet::from_symbols(vec!["x".into(), "xy".into(), "y".into()]);
        let u = alpha.parse("xyxy").unwrap();
        assert_eq!(u, Word::from_codes(&[1, 1]));
        assert_eq!(alpha.render(u.letters()), "xyxy");
        assert!(alpha.parse("xz").is_err());
    }

    fn word_strategy() -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec((0u8..3).prop_map(Letter), 0..24)
    }

    proptest! {
        #[test]
        fn letter_counts_sum_to_length(u in word_strategy()) {
            prop_assume!(!u.is_empty());
            let counts = abelianise(&u, 3).unwrap();
            prop_assert_eq!(counts.iter().sum::<usize>(), u.len());
            for l in 0..3u8 {
                prop_assert_eq!(counts[l as usize], count_occurrences(&u, &[Letter(l)]));
            }
        }

        #[test]
        fn occurrences_superadditive(u in word_strategy(), v in word_strategy(), x in word_strategy()) {
            prop_assume!(!x.is_empty());
            let uv: Vec<Letter> = u.iter().chain(v.iter()).copied().collect();
            prop_assert!(count_occurrences(&uv, &x) >= count_occurrences(&u, &x) + count_occurrences(&v, &x));
        }

        #[test]
        fn word_occurs_in_itself(u in word_strategy()) {
            prop_assume!(!u.is_empty());
            prop_assert!(count_occurrences(&u, &u) >= 1);
        }
    }
}
