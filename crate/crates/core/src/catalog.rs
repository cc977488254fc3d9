//! Standard example substitutions, parameterised by their free probabilities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::config::{RawImage, RawRule};
use crate::error::Result;
use crate::substitution::{validate_rule, SubstitutionRule};

/// `num/den` as an exact rational.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn build(alphabet: &[&str], rules: &[(&str, Vec<(&str, BigRational)>)]) -> Result<SubstitutionRule> {
    let raw = RawRule {
        alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
        rules: rules
            .iter()
            .map(|(a, images)| {
                let images = images
                    .iter()
                    .map(|(w, p)| RawImage {
                        word: w.to_string(),
                        prob: p.to_string(),
                    })
                    .collect();
                (a.to_string(), images)
            })
            .collect(),
    };
    validate_rule(&raw)
}

fn one() -> BigRational {
    BigRational::one()
}

/// `a -> ab | ba` with probabilities `p1`, `1 - p1`; `b -> a`.
pub fn random_fibonacci(p1: &BigRational) -> Result<SubstitutionRule> {
    build(
        &["a", "b"],
        &[
            ("a", vec![("ab", p1.clone()), ("ba", one() - p1)]),
            ("b", vec![("a", one())]),
        ],
    )
}

/// `a -> ab`, `b -> a`.
pub fn deterministic_fibonacci() -> Result<SubstitutionRule> {
    build(&["a", "b"], &[("a", vec![("ab", one())]), ("b", vec![("a", one())])])
}

/// Random period doubling: `a -> ab | ba` with probabilities `p`, `1 - p`; `b -> aa`.
pub fn period_doubling(p: &BigRational) -> Result<SubstitutionRule> {
    build(
        &["a", "b"],
        &[
            ("a", vec![("ab", p.clone()), ("ba", one() - p)]),
            ("b", vec![("aa", one())]),
        ],
    )
}

/// Both letters map to `ab | ba` with probabilities `p`, `1 - p`.
pub fn zeta(p: &BigRational) -> Result<SubstitutionRule> {
    let images = || vec![("ab", p.clone()), ("ba", one() - p)];
    build(&["a", "b"], &[("a", images()), ("b", images())])
}

/// The Dyck-shift substitution on `( [ ) ]` with uniform probabilities.
pub fn dyck() -> Result<SubstitutionRule> {
    let third = ratio(1, 3);
    let images = |ws: [&'static str; 3]| ws.iter().map(|&w| (w, third.clone())).collect::<Vec<_>>();
    build(
        &["(", "[", ")", "]"],
        &[
            ("(", images(["(()", "([]", "("])),
            ("[", images(["[()", "[[]", "["])),
            (")", images(["())", "[])", ")"])),
            ("]", images(["[]]", "()]", "]"])),
        ],
    )
}

/// `a, b -> a | b` with probabilities `p1`, `1 - p1`.
pub fn non_expanding(p1: &BigRational) -> Result<SubstitutionRule> {
    let images = || vec![("a", p1.clone()), ("b", one() - p1)];
    build(&["a", "b"], &[("a", images()), ("b", images())])
}

/// `a -> b | ba` with probabilities `p1`, `1 - p1`; `b -> b | ab` with `q1`, `1 - q1`.
pub fn kernel_example(p1: &BigRational, q1: &BigRational) -> Result<SubstitutionRule> {
    build(
        &["a", "b"],
        &[
            ("a", vec![("b", p1.clone()), ("ba", one() - p1)]),
            ("b", vec![("b", q1.clone()), ("ab", one() - q1)]),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_examples_validate() {
        let half = ratio(1, 2);
        assert!(random_fibonacci(&half).is_ok());
        assert!(deterministic_fibonacci().unwrap().is_deterministic());
        assert!(period_doubling(&half).is_ok());
        assert!(zeta(&half).is_ok());
        assert_eq!(dyck().unwrap().size(), 4);
        assert!(non_expanding(&half).is_ok());
        assert!(kernel_example(&half, &half).is_ok());
    }

    #[test]
    fn degenerate_probability_is_rejected() {
        assert!(period_doubling(&ratio(0, 1)).is_err());
        assert!(zeta(&ratio(3, 2)).is_err());
    }
}
