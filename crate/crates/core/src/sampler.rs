//! Monte-Carlo realisations of iterated random substitutions.
//!
//! Words are inflated round by round in flat buffers, every letter drawing its image
//! independently. Randomness is pinned for reproducibility:
//!
//! * a single realisation with seed `s` uses `ChaCha8Rng::seed_from_u64(s)`;
//! * trial `i` of a multi-trial run with base seed `s` uses the single-realisation
//!   path with seed `trial_seed(s, i)`, a SplitMix64 finaliser applied to
//!   `s + (i + 1) · 0x9E3779B97F4A7C15`.
//!
//! Trials run in parallel, but results are gathered in trial order and reduced
//! sequentially, so outputs are bitwise independent of scheduling.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::language::language_table_with_limits;
use crate::limits::Limits;
use crate::spectral::pf_eigenpair;
use crate::substitution::{mean_matrix, SubstitutionRule};
use crate::words::{count_occurrences, Letter, Word};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `i` derived from the base seed.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(seed.wrapping_add(trial.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Mean and standard error of a per-trial statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleStats {
    pub estimate: f64,
    pub stderr: f64,
    pub trials: usize,
    pub n: usize,
    pub seed: u64,
}

impl SampleStats {
    /// Shifted by the first sample, so identical samples give exactly that value and
    /// zero error.
    pub fn from_samples(samples: &[f64], n: usize, seed: u64) -> Self {
        let trials = samples.len();
        assert!(trials > 0, "at least one sample is required");
        let shift = samples[0];
        let mean_dev = samples.iter().map(|x| x - shift).sum::<f64>() / trials as f64;
        let estimate = shift + mean_dev;
        let stderr = if trials > 1 {
            let ss: f64 = samples.iter().map(|x| (x - shift - mean_dev).powi(2)).sum();
            (ss / (trials - 1) as f64 / trials as f64).sqrt()
        } else {
            0.0
        };
        SampleStats {
            estimate,
            stderr,
            trials,
            n,
            seed,
        }
    }
}

/// Per-letter cumulative image probabilities in `f64`.
#[derive(Debug, Clone)]
pub struct Sampler<'a> {
    rule: &'a SubstitutionRule,
    cumulative: Vec<Vec<f64>>,
    letter_budget: usize,
}

impl<'a> Sampler<'a> {
    pub fn new(rule: &'a SubstitutionRule) -> Self {
        Self::with_limits(rule, &Limits::from_env())
    }

    pub fn with_limits(rule: &'a SubstitutionRule, limits: &Limits) -> Self {
        let cumulative = rule
            .alphabet()
            .letters()
            .map(|a| {
                let mut acc = 0.0;
                rule.images(a)
                    .iter()
                    .map(|img| {
                        acc += img.prob.to_f64().unwrap_or(0.0);
                        acc
                    })
                    .collect()
            })
            .collect();
        Sampler {
            rule,
            cumulative,
            letter_budget: limits.letter_budget,
        }
    }

    fn choose(&self, a: Letter, rng: &mut ChaCha8Rng) -> &'a [Letter] {
        let images = self.rule.images(a);
        if images.len() == 1 {
            return images[0].word.letters();
        }
        let u: f64 = rng.gen();
        let cum = &self.cumulative[a.index()];
        let i = cum.iter().position(|&c| u < c).unwrap_or(images.len() - 1);
        images[i].word.letters()
    }

    /// One realisation of `ϑⁿ(a)`, deterministic in `(rule, a, n, seed)`.
    pub fn sample(&self, a: Letter, n: usize, seed: u64) -> Result<Vec<Letter>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut current = vec![a];
        let mut next = Vec::new();
        for _ in 0..n {
            next.clear();
            for &b in &current {
                next.extend_from_slice(self.choose(b, &mut rng));
                if next.len() > self.letter_budget {
                    return Err(Error::GuardExceeded {
                        what: "sampled word length",
                        size: next.len(),
                        limit: self.letter_budget,
                    });
                }
            }
            std::mem::swap(&mut current, &mut next);
        }
        Ok(current)
    }

    /// Runs `stat` on realisations of every trial, in trial order.
    pub fn trials<T: Send>(
        &self,
        a: Letter,
        n: usize,
        trials: usize,
        seed: u64,
        stat: impl Fn(&[Letter]) -> T + Sync,
    ) -> Result<Vec<T>> {
        (0..trials as u64)
            .into_par_iter()
            .map(|i| self.sample(a, n, trial_seed(seed, i)).map(|w| stat(&w)))
            .collect()
    }
}

pub fn sample_iterate(rule: &SubstitutionRule, a: Letter, n: usize, seed: u64) -> Result<Word> {
    Ok(Word::new(Sampler::new(rule).sample(a, n, seed)?))
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    Ok(())
}

/// Mean and standard error of `|ϑⁿ(a)|_v / |ϑⁿ(a)|` over independent trials.
pub fn empirical_frequency(
    rule: &SubstitutionRule,
    a: Letter,
    v: &Word,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<SampleStats> {
    check_trials(trials)?;
    if n == 0 {
        return Err(Error::InvalidArgument("iteration depth must be at least 1".into()));
    }
    if v.is_empty() {
        return Err(Error::EmptyWord);
    }
    let limits = Limits::from_env();
    let table = language_table_with_limits(rule, v.len(), &limits)?;
    if !table.contains(v) {
        return Err(Error::IllegalWord(rule.render(v.letters())));
    }
    let samples = Sampler::with_limits(rule, &limits).trials(a, n, trials, seed, |w| {
        count_occurrences(w, v.letters()) as f64 / w.len() as f64
    })?;
    Ok(SampleStats::from_samples(&samples, n, seed))
}

/// Spread of the normalised letter-count vectors `Φ(ϑⁿ(a)) / |ϑⁿ(a)|` around the
/// letter frequency vector, together with the growth magnitudes `|ϑⁿ(a)| / λⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionReport {
    pub lambda: f64,
    /// Letter frequencies `R^(1)`.
    pub reference: Vec<f64>,
    pub directions: Vec<Vec<f64>>,
    /// `‖direction − R^(1)‖₁` per trial.
    pub distances: Vec<f64>,
    pub max_distance: f64,
    pub magnitudes: Vec<f64>,
    pub magnitude: SampleStats,
}

pub fn gw_direction_estimate(
    rule: &SubstitutionRule,
    a: Letter,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<DirectionReport> {
    check_trials(trials)?;
    let eigen = pf_eigenpair(&mean_matrix(rule).matrix)?;
    let size = rule.size();
    let counts = Sampler::new(rule).trials(a, n, trials, seed, |w| {
        let mut c = vec![0usize; size];
        for l in w {
            c[l.index()] += 1;
        }
        (c, w.len())
    })?;
    let scale = eigen.lambda.powi(n as i32);
    let mut directions = Vec::with_capacity(trials);
    let mut distances = Vec::with_capacity(trials);
    let mut magnitudes = Vec::with_capacity(trials);
    for (c, len) in counts {
        let dir: Vec<f64> = c.iter().map(|&x| x as f64 / len as f64).collect();
        distances.push(dir.iter().zip(&eigen.right).map(|(x, r)| (x - r).abs()).sum());
        directions.push(dir);
        magnitudes.push(len as f64 / scale);
    }
    let max_distance = distances.iter().copied().fold(0.0, f64::max);
    let magnitude = SampleStats::from_samples(&magnitudes, n, seed);
    Ok(DirectionReport {
        lambda: eigen.lambda,
        reference: eigen.right,
        directions,
        distances,
        max_distance,
        magnitudes,
        magnitude,
    })
}

/// Fraction of trials with `|ϑⁿ(a)| < k·n`, with its binomial standard error.
pub fn length_tail(
    rule: &SubstitutionRule,
    a: Letter,
    n: usize,
    k: f64,
    trials: usize,
    seed: u64,
) -> Result<SampleStats> {
    check_trials(trials)?;
    let threshold = k * n as f64;
    let hits = Sampler::new(rule).trials(a, n, trials, seed, |w| {
        if (w.len() as f64) < threshold {
            1.0
        } else {
            0.0
        }
    })?;
    Ok(SampleStats::from_samples(&hits, n, seed))
}
