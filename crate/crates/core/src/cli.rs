//! Command-line front end.
//!
//! Exit codes: `0` on success, `1` on invalid arguments, configs or failed checks,
//! `2` when a resource guard aborts the computation.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::checks::{run_checks, Status};
use crate::config::load_rule;
use crate::entropy::{entropy_series, Flavor};
use crate::error::{Error, Result};
use crate::induced::induced_mean_matrix;
use crate::language::legal_words;
use crate::measure::FrequencyMeasure;
use crate::sampler::{empirical_frequency, gw_direction_estimate, length_tail, SampleStats};
use crate::substitution::SubstitutionRule;
use crate::words::{Letter, Word};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FlavorArg {
    Metric,
    Topological,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "stochsub", version, about = "Primitive random substitutions")]
struct Cli {
    /// JSON rule file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "tsv")]
    format: Format,
    /// Base seed for Monte-Carlo runs [default: 24301 = 0x5EED].
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Legal words of one length, in lexicographic order.
    Language {
        #[arg(long)]
        ell: usize,
    },
    /// Mean matrix of the induced substitution on legal words of one length.
    Matrix {
        #[arg(long, default_value_t = 1)]
        ell: usize,
    },
    /// Frequency measure of cylinders of legal words.
    Freqs {
        #[arg(long)]
        ell: Option<usize>,
        /// Single word; defaults to every legal word of length `--ell`.
        #[arg(long)]
        word: Option<String>,
    },
    /// Entropy partial sums for n = 1..=max-n.
    Entropy {
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "both")]
        flavor: FlavorArg,
    },
    /// Monte-Carlo realisations of n-fold iterates.
    Sample {
        /// Starting letter; defaults to the first letter of the alphabet.
        #[arg(long)]
        letter: Option<String>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Estimate the frequency of this word.
        #[arg(long)]
        word: Option<String>,
        /// Estimate the probability that the iterate is shorter than K·n.
        #[arg(long = "tail-k", alias = "tail-K")]
        tail_k: Option<f64>,
    },
    /// Runs the invariant suite on the rule.
    Check {
        #[arg(long, default_value_t = 3)]
        max_ell: usize,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let _ = out.write_all(report.render(cli.format).as_bytes());
            if report.failed {
                1
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_guard() {
                2
            } else {
                1
            }
        }
    }
}

/// Output of one command: a JSON document and the equivalent table.
struct Report {
    json: Value,
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
    failed: bool,
}

enum Cell {
    Text(String),
    Int(u64),
    Real(f64),
}

impl Report {
    fn new(json: Value, header: &[&str], rows: Vec<Vec<Cell>>) -> Self {
        Report {
            json,
            header: header.iter().map(|h| h.to_string()).collect(),
            rows,
            failed: false,
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("reports serialise");
                s.push('\n');
                s
            }
            Format::Tsv => {
                let mut s = String::new();
                if !self.header.is_empty() {
                    s.push_str(&self.header.join("\t"));
                    s.push('\n');
                }
                for row in &self.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Text(t) => t.clone(),
                            Cell::Int(i) => i.to_string(),
                            Cell::Real(x) => significant(*x, 12),
                        })
                        .collect();
                    s.push_str(&cells.join("\t"));
                    s.push('\n');
                }
                s
            }
        }
    }
}

/// `x` with `digits` significant digits in the style of C's `%g`.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn execute(cli: &Cli) -> Result<Report> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("--config is required".into()))?;
    let rule = load_rule(path)?;
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    match &cli.command {
        Command::Language { ell } => language(&rule, *ell),
        Command::Matrix { ell } => matrix(&rule, *ell),
        Command::Freqs { ell, word } => freqs(&rule, *ell, word.as_deref()),
        Command::Entropy { max_n, flavor } => entropy(&rule, *max_n, *flavor),
        Command::Sample {
            letter,
            n,
            trials,
            word,
            tail_k,
        } => sample(&rule, letter.as_deref(), *n, *trials, seed, word.as_deref(), *tail_k),
        Command::Check { max_ell } => check(&rule, *max_ell),
    }
}

fn render_all(rule: &SubstitutionRule, words: &[Word]) -> Vec<String> {
    words.iter().map(|w| rule.render(w.letters())).collect()
}

fn language(rule: &SubstitutionRule, ell: usize) -> Result<Report> {
    let words = render_all(rule, &legal_words(rule, ell)?);
    let rows = words.iter().map(|w| vec![Cell::Text(w.clone())]).collect();
    Ok(Report::new(json!({ "ell": ell, "words": words }), &[], rows))
}

fn matrix(rule: &SubstitutionRule, ell: usize) -> Result<Report> {
    let m = induced_mean_matrix(rule, ell)?;
    let labels = render_all(rule, &m.labels);
    let entries: Vec<Vec<String>> = m.matrix.rows().map(|r| r.iter().map(rational).collect()).collect();
    let mut header = vec![""];
    header.extend(labels.iter().map(String::as_str));
    let rows = labels
        .iter()
        .zip(&entries)
        .map(|(label, row)| {
            std::iter::once(Cell::Text(label.clone()))
                .chain(row.iter().map(|e| Cell::Text(e.clone())))
                .collect()
        })
        .collect();
    Ok(Report::new(
        json!({ "ell": ell, "labels": labels, "matrix": entries }),
        &header,
        rows,
    ))
}

#[derive(Serialize)]
struct FreqRow {
    word: String,
    measure: f64,
    legal: bool,
}

fn freqs(rule: &SubstitutionRule, ell: Option<usize>, word: Option<&str>) -> Result<Report> {
    let fm = FrequencyMeasure::new(rule.clone())?;
    let (ell, rows) = match word {
        Some(text) => {
            let v = rule.parse_word(text)?;
            if let Some(ell) = ell.filter(|&ell| ell != v.len()) {
                return Err(Error::InvalidArgument(format!(
                    "--word has length {} but --ell is {ell}",
                    v.len()
                )));
            }
            let value = fm.cylinder_measure(&v)?;
            let row = FreqRow {
                word: rule.render(v.letters()),
                measure: value.value,
                legal: value.legal,
            };
            (v.len(), vec![row])
        }
        None => {
            let ell = ell.ok_or_else(|| Error::InvalidArgument("--ell or --word is required".into()))?;
            let level = fm.level(ell)?;
            let rows = level
                .words()
                .iter()
                .zip(level.right())
                .map(|(w, &r)| FreqRow {
                    word: rule.render(w.letters()),
                    measure: r,
                    legal: true,
                })
                .collect();
            (ell, rows)
        }
    };
    let table = rows
        .iter()
        .map(|r| vec![Cell::Text(r.word.clone()), Cell::Real(r.measure)])
        .collect();
    Ok(Report::new(json!({ "ell": ell, "rows": rows }), &["word", "measure"], table))
}

fn entropy(rule: &SubstitutionRule, max_n: usize, flavor: FlavorArg) -> Result<Report> {
    if max_n == 0 {
        return Err(Error::InvalidArgument("--max-n must be at least 1".into()));
    }
    let fm = FrequencyMeasure::new(rule.clone())?;
    let flavors: &[Flavor] = match flavor {
        FlavorArg::Metric => &[Flavor::Metric],
        FlavorArg::Topological => &[Flavor::Topological],
        FlavorArg::Both => &[Flavor::Metric, Flavor::Topological],
    };
    let series = flavors
        .iter()
        .map(|&f| entropy_series(&fm, f, max_n))
        .collect::<Result<Vec<_>>>()?;
    let mut header = vec!["n".to_string()];
    header.extend(flavors.iter().map(Flavor::to_string));
    let mut rows = Vec::with_capacity(max_n);
    let mut json_rows = Vec::with_capacity(max_n);
    for i in 0..max_n {
        let n = series[0].values[i].0;
        let mut row = vec![Cell::Int(n as u64)];
        let mut obj = serde_json::Map::new();
        obj.insert("n".into(), json!(n));
        for s in &series {
            row.push(Cell::Real(s.values[i].1));
            obj.insert(s.flavor.to_string(), json!(s.values[i].1));
        }
        rows.push(row);
        json_rows.push(Value::Object(obj));
    }
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    Ok(Report::new(json!({ "rows": json_rows }), &header, rows))
}

fn stats_cells(name: &str, s: &SampleStats, reference: Option<f64>) -> Vec<Vec<Cell>> {
    let mut rows = vec![
        vec![Cell::Text(format!("{name}.estimate")), Cell::Real(s.estimate)],
        vec![Cell::Text(format!("{name}.stderr")), Cell::Real(s.stderr)],
    ];
    if let Some(r) = reference {
        rows.push(vec![Cell::Text(format!("{name}.reference")), Cell::Real(r)]);
    }
    rows
}

fn sample(
    rule: &SubstitutionRule,
    letter: Option<&str>,
    n: usize,
    trials: usize,
    seed: u64,
    word: Option<&str>,
    tail_k: Option<f64>,
) -> Result<Report> {
    let a = match letter {
        Some(symbol) => rule
            .alphabet()
            .letter(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?,
        None => Letter(0),
    };
    let mut rows = vec![
        vec![Cell::Text("letter".into()), Cell::Text(rule.alphabet().symbol(a).to_string())],
        vec![Cell::Text("n".into()), Cell::Int(n as u64)],
        vec![Cell::Text("trials".into()), Cell::Int(trials as u64)],
        vec![Cell::Text("seed".into()), Cell::Int(seed)],
    ];
    let mut doc = json!({
        "letter": rule.alphabet().symbol(a),
        "n": n,
        "trials": trials,
        "seed": seed,
    });
    if let Some(text) = word {
        let v = rule.parse_word(text)?;
        let stats = empirical_frequency(rule, a, &v, n, trials, seed)?;
        let reference = FrequencyMeasure::new(rule.clone())?.cylinder_measure(&v)?.value;
        rows.extend(stats_cells("frequency", &stats, Some(reference)));
        doc["frequency"] = json!({
            "word": rule.render(v.letters()),
            "estimate": stats.estimate,
            "stderr": stats.stderr,
            "reference": reference,
        });
    }
    if let Some(k) = tail_k {
        let stats = length_tail(rule, a, n, k, trials, seed)?;
        rows.extend(stats_cells("tail", &stats, None));
        doc["tail"] = json!({ "k": k, "estimate": stats.estimate, "stderr": stats.stderr });
    }
    if word.is_none() && tail_k.is_none() {
        let report = gw_direction_estimate(rule, a, n, trials, seed)?;
        rows.push(vec![Cell::Text("lambda".into()), Cell::Real(report.lambda)]);
        rows.extend(stats_cells("magnitude", &report.magnitude, None));
        rows.push(vec![Cell::Text("max_distance".into()), Cell::Real(report.max_distance)]);
        doc["growth"] = json!({
            "lambda": report.lambda,
            "letter_frequencies": report.reference,
            "magnitude": { "estimate": report.magnitude.estimate, "stderr": report.magnitude.stderr },
            "max_distance": report.max_distance,
        });
    }
    Ok(Report::new(doc, &[], rows))
}

fn check(rule: &SubstitutionRule, max_ell: usize) -> Result<Report> {
    let outcomes = run_checks(rule, max_ell)?;
    let rows = outcomes
        .iter()
        .map(|c| {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Skip => "skip",
            };
            vec![Cell::Text(c.name.clone()), Cell::Text(status.into()), Cell::Text(c.detail.clone())]
        })
        .collect();
    let failed = outcomes.iter().any(|c| c.status == Status::Fail);
    let mut report = Report::new(
        json!({ "passed": !failed, "checks": outcomes }),
        &["check", "status", "detail"],
        rows,
    );
    report.failed = failed;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(significant(1.0 / 21.0, 12), "0.047619047619");
        assert_eq!(significant(2.0, 12), "2");
        assert_eq!(significant(0.0, 12), "0");
        assert_eq!(significant(-1.5e-7, 3), "-1.5e-07");
        assert_eq!(significant(123456789012345.0, 12), "1.23456789012e+14");
        assert_eq!(significant(0.0001234, 2), "0.00012");
    }

    #[test]
    fn help_exits_zero() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["stochsub", "--help"], &mut out, &mut err), 0);
        assert!(String::from_utf8(out).unwrap().contains("language"));
    }

    #[test]
    fn unknown_subcommand_exits_one() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["stochsub", "frobnicate"], &mut out, &mut err), 1);
        assert!(!err.is_empty());
    }
}
