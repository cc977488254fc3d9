//! The frequency measure on cylinder sets.
//!
//! A cylinder fixing a legal word `v` at any position has measure `R^(|v|)_v`, the
//! entry of the normalised right Perron–Frobenius vector of the induced mean matrix
//! on legal `|v|`-words. Vectors are computed lazily per window length and cached.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::induced::induced_mean_matrix_from_table;
use crate::language::{language_table_with_limits, LanguageTable};
use crate::limits::Limits;
use crate::spectral::{pf_eigenpair, PfEigenpair};
use crate::substitution::{is_primitive, MeanMatrix, SubstitutionRule};
use crate::words::Word;

/// Frequencies of all legal words of one length.
#[derive(Debug, Clone)]
pub struct FrequencyLevel {
    pub ell: usize,
    pub matrix: MeanMatrix,
    pub eigen: PfEigenpair,
}

impl FrequencyLevel {
    pub fn words(&self) -> &[Word] {
        &self.matrix.labels
    }

    /// `R^(ell)`, in the order of [`FrequencyLevel::words`].
    pub fn right(&self) -> &[f64] {
        &self.eigen.right
    }

    pub fn left(&self) -> &[f64] {
        &self.eigen.left
    }

    pub fn get(&self, w: &Word) -> Option<f64> {
        self.matrix.index_of(w).map(|i| self.eigen.right[i])
    }
}

/// Value of a cylinder; illegal words get `0` with `legal == false`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderValue {
    pub value: f64,
    pub legal: bool,
}

#[derive(Debug)]
pub struct FrequencyMeasure {
    rule: SubstitutionRule,
    limits: Limits,
    table: Mutex<Option<Arc<LanguageTable>>>,
    levels: Mutex<HashMap<usize, Arc<FrequencyLevel>>>,
}

impl FrequencyMeasure {
    pub fn new(rule: SubstitutionRule) -> Result<Self> {
        Self::with_limits(rule, Limits::from_env())
    }

    pub fn with_limits(rule: SubstitutionRule, limits: Limits) -> Result<Self> {
        if !is_primitive(&rule) {
            return Err(Error::NotPrimitive);
        }
        Ok(FrequencyMeasure {
            rule,
            limits,
            table: Mutex::new(None),
            levels: Mutex::new(HashMap::new()),
        })
    }

    pub fn rule(&self) -> &SubstitutionRule {
        &self.rule
    }

    /// Language table covering at least lengths `1..=ell`.
    pub fn language(&self, ell: usize) -> Result<Arc<LanguageTable>> {
        if let Some(table) = self.table.lock().unwrap().as_ref() {
            if table.max_ell() >= ell {
                return Ok(Arc::clone(table));
            }
        }
        let table = Arc::new(language_table_with_limits(&self.rule, ell, &self.limits)?);
        let mut slot = self.table.lock().unwrap();
        match slot.as_ref() {
            Some(existing) if existing.max_ell() >= ell => Ok(Arc::clone(existing)),
            _ => {
                *slot = Some(Arc::clone(&table));
                Ok(table)
            }
        }
    }

    pub fn level(&self, ell: usize) -> Result<Arc<FrequencyLevel>> {
        if ell == 0 {
            return Err(Error::InvalidArgument("window length must be at least 1".into()));
        }
        if let Some(level) = self.levels.lock().unwrap().get(&ell) {
            return Ok(Arc::clone(level));
        }
        let table = self.language(ell)?;
        let matrix = induced_mean_matrix_from_table(&self.rule, &table, ell, &self.limits)?;
        let eigen = pf_eigenpair(&matrix.matrix)?;
        let total: f64 = eigen.right.iter().sum();
        debug_assert!((total - 1.0).abs() <= 1e-12, "right vector not normalised: {total}");
        let level = Arc::new(FrequencyLevel { ell, matrix, eigen });
        Ok(Arc::clone(
            self.levels.lock().unwrap().entry(ell).or_insert(level),
        ))
    }

    /// `μ(Z(v)) = R^(|v|)_v`; the empty word specifies the whole space.
    pub fn cylinder_measure(&self, v: &Word) -> Result<CylinderValue> {
        if v.is_empty() {
            return Ok(CylinderValue { value: 1.0, legal: true });
        }
        if v.letters().iter().any(|l| l.index() >= self.rule.size()) {
            return Ok(CylinderValue { value: 0.0, legal: false });
        }
        let level = self.level(v.len())?;
        Ok(match level.get(v) {
            Some(value) => CylinderValue { value, legal: true },
            None => CylinderValue { value: 0.0, legal: false },
        })
    }

    /// Largest `|R^(ℓ₀)_v − Σ R^(ℓ)_u|` over legal `v` of length `ℓ₀` and offsets `k`,
    /// the sum running over legal `u` of length `ℓ` with `u_[k, k+ℓ₀−1] = v`.
    pub fn consistency_residual(&self, short: usize, long: usize) -> Result<f64> {
        if short == 0 || short > long {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= ell0 <= ell, got ell0 = {short}, ell = {long}"
            )));
        }
        let coarse = self.level(short)?;
        let fine = self.level(long)?;
        let mut worst: f64 = 0.0;
        for offset in 0..=long - short {
            let mut sums = vec![0.0; coarse.words().len()];
            for (u, r) in fine.words().iter().zip(fine.right()) {
                let v = Word::from(&u.letters()[offset..offset + short]);
                let i = coarse
                    .matrix
                    .index_of(&v)
                    .ok_or_else(|| Error::IllegalWord(self.rule.render(v.letters())))?;
                sums[i] += r;
            }
            for (s, r) in sums.iter().zip(coarse.right()) {
                worst = worst.max((s - r).abs());
            }
        }
        Ok(worst)
    }
}

/// Outcome of comparing frequency vectors across probability choices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErgodicityVerdict {
    /// Some frequency of a word of length `ell` moved by `deviation`.
    Sensitive { ell: usize, deviation: f64 },
    /// All frequencies of words up to length `ell` agree within the threshold.
    InsensitiveUpTo { ell: usize, deviation: f64 },
}

impl ErgodicityVerdict {
    pub fn is_sensitive(&self) -> bool {
        matches!(self, ErgodicityVerdict::Sensitive { .. })
    }
}

/// Frequency vectors moving by more than this count as probability-dependent.
pub const SENSITIVITY_THRESHOLD: f64 = 1e-6;

/// Recomputes `R^(j)`, `j <= ell`, for each perturbed rule and compares with the
/// base rule. A finite-`ell` heuristic: insensitivity is never a proof of unique
/// ergodicity.
pub fn unique_ergodicity_probe(
    rule: &SubstitutionRule,
    ell: usize,
    perturbations: &[SubstitutionRule],
) -> Result<ErgodicityVerdict> {
    for other in perturbations {
        if let Some(letter) = rule.first_support_mismatch(other) {
            return Err(Error::SupportMismatch(letter));
        }
    }
    let base = FrequencyMeasure::new(rule.clone())?;
    let others = perturbations
        .iter()
        .map(|r| FrequencyMeasure::new(r.clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for j in 1..=ell {
        let reference = base.level(j)?;
        for other in &others {
            let level = other.level(j)?;
            for (x, y) in reference.right().iter().zip(level.right()) {
                worst = worst.max((x - y).abs());
            }
        }
        if worst > SENSITIVITY_THRESHOLD {
            return Ok(ErgodicityVerdict::Sensitive { ell: j, deviation: worst });
        }
    }
    Ok(ErgodicityVerdict::InsensitiveUpTo { ell, deviation: worst })
}

/// Two reweightings of `rule` with the same supports: letters with `k > 1` images get
/// weights proportional to `1, 2, …, k`, and to `k, …, 1`. Deterministic letters keep
/// their single image.
pub fn probability_perturbations(rule: &SubstitutionRule) -> Result<Vec<SubstitutionRule>> {
    use crate::catalog::ratio;
    let ramp = |reverse: bool| {
        rule.reweighted(|_, images| {
            let k = images.len() as i64;
            let total = k * (k + 1) / 2;
            (1..=k)
                .map(|i| ratio(if reverse { k + 1 - i } else { i }, total))
                .collect()
        })
    };
    Ok(vec![ramp(false)?, ramp(true)?])
}
