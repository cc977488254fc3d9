use num_rational::BigRational;
use proptest::prelude::*;

use stochsub::catalog::{self, ratio};
use stochsub::entropy::{max_entropy_class_check, metric_entropy_partial, topological_entropy_partial};
use stochsub::sampler::empirical_frequency;
use stochsub::{induced_mean_matrix, mean_matrix, FrequencyMeasure, Letter};

fn probability() -> impl Strategy<Value = BigRational> {
    (1i64..20).prop_map(|k| ratio(k, 20))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn entropy_bounded_by_topological(p in probability()) {
        for rule in [catalog::zeta(&p).unwrap(), catalog::random_fibonacci(&p).unwrap()] {
            let fm = FrequencyMeasure::new(rule).unwrap();
            for n in 1..=6 {
                let m = metric_entropy_partial(&fm, n).unwrap();
                let t = topological_entropy_partial(&fm, n).unwrap();
                prop_assert!(m >= 0.0 && m <= t + 1e-9, "n = {}: {} > {}", n, m, t);
            }
        }
    }

    #[test]
    fn induced_spectrum_matches_letters(p in probability()) {
        let rule = catalog::period_doubling(&p).unwrap();
        let mean = mean_matrix(&rule).matrix;
        for ell in 2..=3 {
            let induced = induced_mean_matrix(&rule, ell).unwrap();
            for (j, u) in induced.labels.iter().enumerate() {
                prop_assert_eq!(induced.matrix.column_sum(j), mean.column_sum(u.letters()[0].index()));
            }
        }
        let fm = FrequencyMeasure::new(rule).unwrap();
        prop_assert!(fm.consistency_residual(2, 4).unwrap() < 1e-9);
    }
}

#[test]
fn uniform_constant_length_rule_is_nearly_maximal() {
    let report = max_entropy_class_check(&catalog::zeta(&ratio(1, 2)).unwrap()).unwrap();
    let cmp = report.comparison.unwrap();
    assert_eq!(cmp.n, 12);
    assert!((cmp.metric - cmp.topological).abs() <= 0.02);
    assert!(cmp.metric <= cmp.topological + 1e-9);
}

#[test]
fn zeta_entropy_peaks_at_half() {
    let h = |p: BigRational| {
        let fm = FrequencyMeasure::new(catalog::zeta(&p).unwrap()).unwrap();
        (6..=10).map(|n| metric_entropy_partial(&fm, n).unwrap()).collect::<Vec<_>>()
    };
    let half = h(ratio(1, 2));
    for other in [h(ratio(1, 4)), h(ratio(3, 4)), h(ratio(2, 5))] {
        for (a, b) in half.iter().zip(&other) {
            assert!(a >= b);
        }
    }
}

#[test]
fn empirical_frequencies_approach_the_measure() {
    let rule = catalog::period_doubling(&ratio(1, 2)).unwrap();
    let fm = FrequencyMeasure::new(rule.clone()).unwrap();
    for text in ["b", "ab", "bb", "aab"] {
        let v = rule.parse_word(text).unwrap();
        let target = fm.cylinder_measure(&v).unwrap().value;
        let deviations: Vec<f64> = [4, 8, 12]
            .iter()
            .map(|&n| {
                let s = empirical_frequency(&rule, Letter(0), &v, n, 200, 3).unwrap();
                (s.estimate - target).abs()
            })
            .collect();
        let s = empirical_frequency(&rule, Letter(0), &v, 12, 200, 3).unwrap();
        assert!(deviations[2] <= (3.0 * s.stderr).max(0.01), "{text}: {deviations:?}");
        assert!(deviations[2] <= deviations[0] + 0.01, "{text}: {deviations:?}");
    }
}
