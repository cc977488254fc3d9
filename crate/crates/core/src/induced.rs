//! Mean matrices of the induced substitution on legal `ell`-words.
//!
//! The induced image of a legal word `u` is the list of `ell`-windows of
//! `ϑ(u_1 ⋯ u_ell)` starting inside `ϑ(u_1)`. Since every image is nonempty these
//! windows only see the first `|ϑ(u_1)| + ell - 1` letters, so a column is computed
//! by enumerating joint image choices letter by letter and stopping as soon as that
//! prefix is covered. The images of the remaining letters would contribute a factor
//! equal to their total probability, which is one.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::language::{language_table_with_limits, LanguageTable};
use crate::limits::Limits;
use crate::matrix::RationalMatrix;
use crate::substitution::{is_expanding, MeanMatrix, SubstitutionRule};
use crate::words::{Letter, Word};

pub type InducedMeanMatrix = MeanMatrix;

pub fn induced_mean_matrix(rule: &SubstitutionRule, ell: usize) -> Result<InducedMeanMatrix> {
    let limits = Limits::from_env();
    let table = language_table_with_limits(rule, ell, &limits)?;
    induced_mean_matrix_from_table(rule, &table, ell, &limits)
}

/// Induced mean matrix with rows and columns in the order of `table.words(ell)`.
pub fn induced_mean_matrix_from_table(
    rule: &SubstitutionRule,
    table: &LanguageTable,
    ell: usize,
    limits: &Limits,
) -> Result<InducedMeanMatrix> {
    if ell == 0 || ell > table.max_ell() {
        return Err(Error::InvalidArgument(format!(
            "window length {ell} outside the language table (1..={})",
            table.max_ell()
        )));
    }
    if ell > 1 && !is_expanding(rule) {
        return Err(Error::NotExpanding { ell });
    }
    let labels = table.words(ell).to_vec();
    for u in &labels {
        let joint: usize = u
            .letters()
            .iter()
            .try_fold(1usize, |acc, &a| acc.checked_mul(rule.images(a).len()))
            .unwrap_or(usize::MAX);
        if joint > limits.enumeration {
            return Err(Error::GuardExceeded {
                what: "joint image realisations per column",
                size: joint,
                limit: limits.enumeration,
            });
        }
    }

    let columns: Vec<Result<Vec<BigRational>>> = labels
        .par_iter()
        .map(|u| induced_column(rule, table, u))
        .collect();
    let dim = labels.len();
    let mut matrix = RationalMatrix::zeros(dim);
    for (col, column) in columns.into_iter().enumerate() {
        for (row, value) in column?.into_iter().enumerate() {
            *matrix.get_mut(row, col) = value;
        }
    }
    Ok(MeanMatrix { ell, labels, matrix })
}

fn induced_column(rule: &SubstitutionRule, table: &LanguageTable, u: &Word) -> Result<Vec<BigRational>> {
    let mut column = vec![BigRational::zero(); table.words(u.len()).len()];
    let mut buffer = Vec::new();
    expand(rule, table, u.letters(), 0, None, &BigRational::one(), &mut buffer, &mut column)?;
    Ok(column)
}

/// Depth-first over image choices of `u[pos..]`; `first_len` is `|ϑ(u_1)|` once chosen.
#[allow(clippy::too_many_arguments)]
fn expand(
    rule: &SubstitutionRule,
    table: &LanguageTable,
    u: &[Letter],
    pos: usize,
    first_len: Option<usize>,
    weight: &BigRational,
    buffer: &mut Vec<Letter>,
    column: &mut [BigRational],
) -> Result<()> {
    let ell = u.len();
    if let Some(starts) = first_len {
        if buffer.len() >= starts + ell - 1 {
            for window in buffer[..starts + ell - 1].windows(ell) {
                let w = Word::from(window);
                let row = table
                    .index_of(&w)
                    .ok_or_else(|| Error::IllegalWord(rule.render(window)))?;
                column[row] += weight;
            }
            return Ok(());
        }
    }
    for img in rule.images(u[pos]) {
        let mark = buffer.len();
        buffer.extend_from_slice(img.word.letters());
        let first = first_len.or(Some(img.word.len()));
        expand(rule, table, u, pos + 1, first, &(weight * &img.prob), buffer, column)?;
        buffer.truncate(mark);
    }
    Ok(())
}
