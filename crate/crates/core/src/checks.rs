//! Invariant suite run by the `check` subcommand.

use num_rational::BigRational;
use serde::Serialize;

use crate::entropy::{max_entropy_class_check_at, metric_entropy_partial, topological_entropy_partial};
use crate::error::{Error, Result};
use crate::induced::induced_mean_matrix_from_table;
use crate::limits::Limits;
use crate::measure::FrequencyMeasure;
use crate::spectral::pf_eigenpair;
use crate::substitution::{is_expanding, mean_matrix, primitivity_exponent, SubstitutionRule};

/// Numerical tolerance shared by the floating-point checks.
pub const CHECK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        }
    }

    /// Informational outcome: passes when `applies`, skipped otherwise.
    fn informational(name: &str, applies: bool, detail: String) -> Self {
        if applies {
            CheckOutcome::new(name, true, detail)
        } else {
            CheckOutcome::skip(name, detail)
        }
    }

    fn skip(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            status: Status::Skip,
            detail: detail.into(),
        }
    }
}

/// Runs every invariant on words of length up to `max_ell`. Guard aborts are
/// returned as errors; other failures become failing outcomes.
pub fn run_checks(rule: &SubstitutionRule, max_ell: usize) -> Result<Vec<CheckOutcome>> {
    if max_ell == 0 {
        return Err(Error::InvalidArgument("window length must be at least 1".into()));
    }
    let mut out = Vec::new();
    let mean = mean_matrix(rule);

    let exponent = primitivity_exponent(rule);
    out.push(CheckOutcome::new(
        "primitive",
        exponent.is_some(),
        match exponent {
            Some(k) => format!("M^{k} > 0"),
            None => "no power of M is positive".into(),
        },
    ));
    if exponent.is_none() {
        out.push(CheckOutcome::skip("remaining", "rule is not primitive"));
        return Ok(out);
    }

    let eigen = match pf_eigenpair(&mean.matrix) {
        Ok(e) => e,
        Err(e) => {
            out.push(CheckOutcome::new("eigenpair", false, e.to_string()));
            return Ok(out);
        }
    };
    let lambda = eigen.lambda;
    let expanding = is_expanding(rule);
    out.push(CheckOutcome::new(
        "expanding",
        expanding == (lambda > 1.0 + CHECK_TOLERANCE),
        format!("expanding = {expanding}, lambda = {lambda}"),
    ));

    // column sums of M are the expected image lengths
    let lengths_ok = rule.alphabet().letters().all(|b| {
        let expected: BigRational = rule
            .images(b)
            .iter()
            .map(|img| &img.prob * BigRational::from_integer(img.word.len().into()))
            .sum();
        mean.matrix.column_sum(b.index()) == expected
    });
    out.push(CheckOutcome::new("mean column sums", lengths_ok, "exact"));

    let fm = FrequencyMeasure::new(rule.clone())?;
    let ells = if expanding { max_ell } else { 1 };
    if !expanding && max_ell > 1 {
        out.push(CheckOutcome::skip("induced levels", "induced matrices need an expanding rule"));
    }
    let table = fm.language(ells)?;
    for ell in 1..=ells {
        let induced = induced_mean_matrix_from_table(rule, &table, ell, &Limits::from_env())?;
        let columns_ok = induced.labels.iter().enumerate().all(|(j, u)| {
            induced.matrix.column_sum(j) == mean.matrix.column_sum(u.letters()[0].index())
        });
        out.push(CheckOutcome::new(
            format!("induced column sums (ell={ell})"),
            columns_ok,
            format!("{} legal words", induced.dim()),
        ));

        let level = match fm.level(ell) {
            Ok(level) => level,
            Err(e) if e.is_guard() => return Err(e),
            Err(e) => {
                out.push(CheckOutcome::new(format!("eigenpair (ell={ell})"), false, e.to_string()));
                continue;
            }
        };
        let dl = (level.eigen.lambda - lambda).abs();
        let dleft = level
            .words()
            .iter()
            .zip(level.left())
            .map(|(u, l)| (l - eigen.left[u.letters()[0].index()]).abs())
            .fold(0.0, f64::max);
        out.push(CheckOutcome::new(
            format!("spectral coincidence (ell={ell})"),
            dl <= CHECK_TOLERANCE && dleft <= CHECK_TOLERANCE,
            format!("|dlambda| = {dl:e}, max |dL| = {dleft:e}"),
        ));
        let total: f64 = level.right().iter().sum();
        out.push(CheckOutcome::new(
            format!("normalisation (ell={ell})"),
            (total - 1.0).abs() <= CHECK_TOLERANCE,
            format!("sum R = {total}"),
        ));
        let consistency = (1..=ell)
            .map(|short| fm.consistency_residual(short, ell))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        out.push(CheckOutcome::new(
            format!("consistency (ell={ell})"),
            consistency <= CHECK_TOLERANCE,
            format!("max residual = {consistency:e}"),
        ));
        let metric = metric_entropy_partial(&fm, ell)?;
        let top = topological_entropy_partial(&fm, ell)?;
        out.push(CheckOutcome::new(
            format!("entropy bound (n={ell})"),
            metric <= top + CHECK_TOLERANCE && metric >= -CHECK_TOLERANCE,
            format!("metric = {metric}, topological = {top}"),
        ));
    }

    let report = max_entropy_class_check_at(rule, ells)?;
    let detail = match (report.qualifies, report.predicted) {
        (false, _) => "not in the constant-length class".to_string(),
        (true, None) => format!("N = {}, {} images, non-uniform", report.length.unwrap_or(0), report.count.unwrap_or(0)),
        (true, Some(h)) => format!("predicted entropy {h}"),
    };
    out.push(CheckOutcome::informational("max-entropy class", report.qualifies, detail));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, ratio};

    fn statuses(rule: &SubstitutionRule, max_ell: usize) -> Vec<(String, Status)> {
        run_checks(rule, max_ell).unwrap().into_iter().map(|c| (c.name, c.status)).collect()
    }

    #[test]
    fn example_rules_pass() {
        let half = ratio(1, 2);
        for rule in [
            catalog::random_fibonacci(&half).unwrap(),
            catalog::period_doubling(&ratio(1, 4)).unwrap(),
            catalog::zeta(&half).unwrap(),
        ] {
            let all = statuses(&rule, 3);
            assert!(all.iter().all(|(_, s)| *s != Status::Fail), "{all:?}");
            assert!(all.iter().any(|(n, _)| n == "consistency (ell=3)"));
        }
    }

    #[test]
    fn non_expanding_rule_stops_at_letters() {
        let all = statuses(&catalog::non_expanding(&ratio(1, 3)).unwrap(), 3);
        assert!(all.iter().all(|(_, s)| *s != Status::Fail), "{all:?}");
        assert!(all.contains(&("induced levels".to_string(), Status::Skip)));
        assert!(!all.iter().any(|(n, _)| n.ends_with("(ell=2)")));
    }

    #[test]
    fn non_primitive_rule_fails() {
        let raw = crate::config::RawRule::from_json(
            r#"{"alphabet":["a","b"],"rules":{"a":[{"word":"ab","prob":"1"}],"b":[{"word":"b","prob":"1"}]}}"#,
        )
        .unwrap();
        let rule = crate::substitution::validate_rule(&raw).unwrap();
        let all = statuses(&rule, 2);
        assert_eq!(all[0], ("primitive".to_string(), Status::Fail));
    }
}
