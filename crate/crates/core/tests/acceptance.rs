//! Acceptance suite: one pass/fail line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use stochsub::catalog::{self, ratio};
use stochsub::induced::induced_mean_matrix;
use stochsub::measure::{probability_perturbations, unique_ergodicity_probe, ErgodicityVerdict, FrequencyMeasure};
use stochsub::sampler::{empirical_frequency, Sampler};
use stochsub::{
    entropy, is_expanding, is_primitive, iterate_distribution, kernel, mean_matrix, pf_eigenpair, Letter,
    RationalMatrix, SubstitutionRule, Word,
};

const SEED: u64 = 0x5EED;

type Outcome = Result<String, String>;

type Criterion = (u32, &'static str, Option<Duration>, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T>(r: stochsub::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn q(num: i64, den: i64) -> BigRational {
    ratio(num, den)
}

fn three_ps() -> [BigRational; 3] {
    [q(1, 4), q(1, 2), q(3, 4)]
}

fn main_rules() -> Vec<(&'static str, SubstitutionRule)> {
    let half = q(1, 2);
    vec![
        ("random Fibonacci", catalog::random_fibonacci(&half).unwrap()),
        ("period doubling", catalog::period_doubling(&half).unwrap()),
        ("zeta", catalog::zeta(&half).unwrap()),
    ]
}

fn pd_induced_closed_form(p: &BigRational) -> RationalMatrix {
    let one = q(1, 1);
    let qq = &one - p;
    let pq = p * &qq;
    let z = q(0, 1);
    RationalMatrix::from_rows(vec![
        vec![pq.clone(), qq.clone(), &one + p, q(2, 1)],
        vec![&one - &pq, p.clone(), qq, z.clone()],
        vec![&one - &pq, one.clone(), z.clone(), z.clone()],
        vec![pq, z.clone(), z.clone(), z],
    ])
}

fn criterion_1() -> Outcome {
    for p in three_ps() {
        let rule = e(catalog::period_doubling(&p))?;
        let m = mean_matrix(&rule).matrix;
        let expected = RationalMatrix::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(1, 1), q(0, 1)]]);
        ensure(m == expected, format!("mean matrix differs at p = {p}"))?;
        let induced = e(induced_mean_matrix(&rule, 2))?;
        let labels: Vec<String> = induced.labels.iter().map(|w| rule.render(w.letters())).collect();
        ensure(labels == ["aa", "ab", "ba", "bb"], format!("labels {labels:?}"))?;
        ensure(induced.matrix == pd_induced_closed_form(&p), format!("induced matrix differs at p = {p}"))?;
    }
    Ok("exact at p = 1/4, 1/2, 3/4".into())
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in three_ps() {
        let x = num_traits::ToPrimitive::to_f64(&p).unwrap();
        let d = 3.0 * (x * x - x + 2.0);
        let mid = 2.0 * (1.0 - x + x * x) / d;
        let expected = [2.0 / d, mid, mid, (x - x * x) / d];
        let fm = e(FrequencyMeasure::new(e(catalog::period_doubling(&p))?))?;
        let level = e(fm.level(2))?;
        for (r, ex) in level.right().iter().zip(expected) {
            worst = worst.max((r - ex).abs());
        }
    }
    ensure(worst <= 1e-10, format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:e}"))
}

fn criterion_3() -> Outcome {
    for (p1, q1) in [(q(1, 3), q(2, 5)), (q(1, 2), q(1, 2)), (q(7, 9), q(1, 11))] {
        let rule = e(catalog::kernel_example(&p1, &q1))?;
        let (p2, q2) = (q(1, 1) - &p1, q(1, 1) - &q1);
        let got = kernel(&rule, e(rule.parse_word("ab"))?.letters(), e(rule.parse_word("bab"))?.letters());
        ensure(got == &p2 * &q1 + &p1 * &q2, format!("kernel(ab, bab) = {got} at p1 = {p1}, q1 = {q1}"))?;
    }
    for p1 in [q(1, 3), q(1, 2), q(5, 7)] {
        let rule = e(catalog::random_fibonacci(&p1))?;
        let p2 = q(1, 1) - &p1;
        let dist = e(iterate_distribution(&rule, &e(rule.parse_word("a"))?, 2))?;
        let got: BTreeMap<String, BigRational> = dist
            .entries
            .iter()
            .map(|(w, p)| (rule.render(w.letters()), p.clone()))
            .collect();
        let expected: BTreeMap<String, BigRational> = [
            ("aab".to_string(), &p2 * &p1),
            ("aba".to_string(), &p1 * &p1 + &p2 * &p2),
            ("baa".to_string(), &p1 * &p2),
        ]
        .into_iter()
        .collect();
        ensure(got == expected, format!("law of the second iterate at p1 = {p1}: {got:?}"))?;
    }
    Ok("exact".into())
}

fn criterion_4() -> Outcome {
    let half = q(1, 2);
    let mut worst: f64 = 0.0;
    for rule in [e(catalog::random_fibonacci(&half))?, e(catalog::period_doubling(&half))?] {
        let base = e(pf_eigenpair(&mean_matrix(&rule).matrix))?;
        let fm = e(FrequencyMeasure::new(rule))?;
        for ell in 1..=4 {
            let level = e(fm.level(ell))?;
            worst = worst.max((level.eigen.lambda - base.lambda).abs());
            for (u, l) in level.words().iter().zip(level.left()) {
                worst = worst.max((l - base.left[u.letters()[0].index()]).abs());
            }
        }
    }
    ensure(worst <= 1e-9, format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:e}"))
}

fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    for (name, rule) in main_rules() {
        let fm = e(FrequencyMeasure::new(rule))?;
        for long in 1..=5 {
            for short in 1..=long {
                let r = e(fm.consistency_residual(short, long))?;
                ensure(r <= 1e-9, format!("{name}: residual {r:e} at ({short}, {long})"))?;
                worst = worst.max(r);
            }
        }
    }
    Ok(format!("max residual {worst:e}"))
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    for (name, rule) in main_rules() {
        let fm = e(FrequencyMeasure::new(rule.clone()))?;
        for ell in 1..=6 {
            let total: f64 = e(fm.level(ell))?.right().iter().sum();
            ensure((total - 1.0).abs() <= 1e-9, format!("{name}: sum R = {total} at ell = {ell}"))?;
            worst = worst.max((total - 1.0).abs());
        }
        let mean = mean_matrix(&rule).matrix;
        for ell in 1..=4 {
            let induced = e(induced_mean_matrix(&rule, ell))?;
            for (j, u) in induced.labels.iter().enumerate() {
                ensure(
                    induced.matrix.column_sum(j) == mean.column_sum(u.letters()[0].index()),
                    format!("{name}: column sum of {} at ell = {ell}", rule.render(u.letters())),
                )?;
            }
        }
    }
    Ok(format!("max |sum R - 1| = {worst:e}; column sums exact"))
}

fn criterion_7() -> Outcome {
    let half = q(1, 2);
    let pd = e(catalog::period_doubling(&half))?;
    let bb = e(pd.parse_word("bb"))?;
    let s = e(empirical_frequency(&pd, Letter(0), &bb, 12, 200, SEED))?;
    let target = 1.0 / 21.0;
    let tol = (3.0 * s.stderr).max(0.005);
    ensure(
        (s.estimate - target).abs() <= tol,
        format!("bb: {} vs {target} (tol {tol})", s.estimate),
    )?;

    let fib = e(catalog::random_fibonacci(&half))?;
    let a = e(fib.parse_word("a"))?;
    let t = e(empirical_frequency(&fib, Letter(0), &a, 12, 200, SEED))?;
    let target_a = 2.0 / (1.0 + 5f64.sqrt());
    let tol_a = (3.0 * t.stderr).max(0.005);
    ensure(
        (t.estimate - target_a).abs() <= tol_a,
        format!("a: {} vs {target_a} (tol {tol_a})", t.estimate),
    )?;
    Ok(format!(
        "bb: {:.6} (stderr {:.2e}); a: {:.6} (stderr {:.2e})",
        s.estimate, s.stderr, t.estimate, t.stderr
    ))
}

fn criterion_8() -> Outcome {
    let rule = e(catalog::random_fibonacci(&q(1, 3)))?;
    let exact = e(iterate_distribution(&rule, &Word::new(vec![Letter(0)]), 2))?;
    let trials = 10_000;
    let samples = e(Sampler::new(&rule).trials(Letter(0), 2, trials, SEED, |w| Word::from(w)))?;
    let mut counts: BTreeMap<Word, usize> = BTreeMap::new();
    for w in samples {
        ensure(exact.entries.contains_key(&w), format!("impossible outcome {}", rule.render(w.letters())))?;
        *counts.entry(w).or_default() += 1;
    }
    let chi2: f64 = exact
        .entries
        .iter()
        .map(|(w, p)| {
            let expected = trials as f64 * num_traits::ToPrimitive::to_f64(p).unwrap();
            let observed = *counts.get(w).unwrap_or(&0) as f64;
            (observed - expected).powi(2) / expected
        })
        .sum();
    let df = (exact.entries.len() - 1) as f64;
    let critical = ChiSquared::new(df).unwrap().inverse_cdf(1.0 - 0.001);
    ensure(chi2 <= critical, format!("chi2 = {chi2:.3} > {critical:.3}"))?;
    Ok(format!("chi2 = {chi2:.3} <= {critical:.3} (df {df})"))
}

/// Finite-n metric entropy of ζ at even n = 2m from the block-decomposition count.
/// The sum runs over expected occurrence counts, which are λ = 2 times the
/// normalised frequencies.
fn zeta_metric_oracle(p: f64, m: usize) -> f64 {
    let qq = 1.0 - p;
    let f = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
    let mi = m as i32;
    let err_a = f(p.powi(mi) + qq.powi(mi + 1)) - f(p.powi(mi)) - f(qq.powi(mi + 1));
    let err_b = f(p.powi(mi + 1) + qq.powi(mi)) - f(p.powi(mi + 1)) - f(qq.powi(mi));
    let s = (2 * m + 1) as f64 * (f(p) + f(qq)) + err_a + err_b;
    -(0.5 * s - 2f64.ln()) / (2 * m) as f64
}

fn criterion_9() -> Outcome {
    let target = 0.5 * 2f64.ln();
    let mut problems = Vec::new();
    let mut metric = BTreeMap::new();
    for (label, p) in [("1/4", q(1, 4)), ("1/2", q(1, 2)), ("3/4", q(3, 4))] {
        let x = num_traits::ToPrimitive::to_f64(&p).unwrap();
        let fm = e(FrequencyMeasure::new(e(catalog::zeta(&p))?))?;
        let series = e(entropy::entropy_series(&fm, entropy::Flavor::Metric, 12))?;
        for m in 1..=6 {
            let h = series.values[2 * m - 1].1;
            let oracle = zeta_metric_oracle(x, m);
            if (h - oracle).abs() > 1e-9 {
                problems.push(format!("p = {label}, n = {}: {h} vs oracle {oracle}", 2 * m));
            }
        }
        metric.insert(label, series);
    }
    let half = &metric["1/2"];
    for n in 6..=12 {
        let h = half.values[n - 1].1;
        for other in ["1/4", "3/4"] {
            let g = metric[other].values[n - 1].1;
            if h < g {
                problems.push(format!("n = {n}: h(1/2) = {h} < h({other}) = {g}"));
            }
        }
    }
    let fm = e(FrequencyMeasure::new(e(catalog::zeta(&q(1, 2)))?))?;
    let h_metric = half.values[11].1;
    let h_top = e(entropy::topological_entropy_partial(&fm, 12))?;
    for (name, h) in [("metric", h_metric), ("topological", h_top)] {
        if (h - target).abs() > 0.05 {
            problems.push(format!("{name} h_12 = {h:.6}, |h - {target:.6}| = {:.4} > 0.05", (h - target).abs()));
        }
    }
    let summary = format!("h_12 metric = {h_metric:.6}, topological = {h_top:.6}");
    if problems.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; {}", problems.join("; ")))
    }
}

fn criterion_10() -> Outcome {
    let half = q(1, 2);
    for (name, rule) in [
        ("random Fibonacci", e(catalog::random_fibonacci(&half))?),
        ("period doubling", e(catalog::period_doubling(&half))?),
        ("zeta", e(catalog::zeta(&half))?),
        ("Dyck", e(catalog::dyck())?),
    ] {
        ensure(is_primitive(&rule), format!("{name} not primitive"))?;
        ensure(is_expanding(&rule), format!("{name} not expanding"))?;
        let lambda = e(pf_eigenpair(&mean_matrix(&rule).matrix))?.lambda;
        ensure(lambda > 1.0, format!("{name}: lambda = {lambda}"))?;
    }
    let rule = e(catalog::non_expanding(&q(1, 3)))?;
    ensure(!is_expanding(&rule), "counterexample reported expanding")?;
    let lambda = e(pf_eigenpair(&mean_matrix(&rule).matrix))?.lambda;
    ensure((lambda - 1.0).abs() <= 1e-12, format!("counterexample lambda = {lambda}"))?;
    Ok(format!("counterexample lambda = {lambda}"))
}

fn criterion_11() -> Outcome {
    let half = q(1, 2);
    let mut details = Vec::new();
    for (name, rule) in [("period doubling", e(catalog::period_doubling(&half))?), ("zeta", e(catalog::zeta(&half))?)] {
        let verdict = e(unique_ergodicity_probe(&rule, 2, &e(probability_perturbations(&rule))?))?;
        ensure(verdict.is_sensitive(), format!("{name}: {verdict:?}"))?;
        details.push(format!("{name}: {verdict:?}"));
    }
    let fib = e(catalog::deterministic_fibonacci())?;
    let verdict = e(unique_ergodicity_probe(&fib, 4, &e(probability_perturbations(&fib))?))?;
    ensure(
        matches!(verdict, ErgodicityVerdict::InsensitiveUpTo { ell: 4, .. }),
        format!("deterministic Fibonacci: {verdict:?}"),
    )?;
    details.push(format!("deterministic Fibonacci: {verdict:?}"));
    Ok(details.join("; "))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "exact mean and induced matrices", Some(Duration::from_secs(1)), criterion_1),
        (2, "frequency vector closed form", Some(Duration::from_secs(1)), criterion_2),
        (3, "kernel and iterate law", Some(Duration::from_secs(1)), criterion_3),
        (4, "spectral coincidence", Some(Duration::from_secs(10)), criterion_4),
        (5, "consistency identity", Some(Duration::from_secs(30)), criterion_5),
        (6, "normalisation and column sums", None, criterion_6),
        (7, "Monte-Carlo frequencies", Some(Duration::from_secs(60)), criterion_7),
        (8, "distribution agreement", None, criterion_8),
        (9, "zeta entropy", Some(Duration::from_secs(120)), criterion_9),
        (10, "primitivity and expansion", None, criterion_10),
        (11, "unique-ergodicity probe", None, criterion_11),
    ];
    let mut failures = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if let (Ok(detail), Some(limit)) = (&outcome, budget) {
            if elapsed > limit {
                outcome = Err(format!("{detail}; took {elapsed:.2?}, budget {limit:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name} [{elapsed:.2?}]: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("criterion {id:>2} FAIL  {name} [{elapsed:.2?}]: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 11 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
