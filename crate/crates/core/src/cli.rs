//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 search cap exhausted.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{self, CatalogStatus, CoverRecord, WitnessRecord};
use crate::cover::{self, min_simple_lift_degree_with, simple_lift_among, LiftSearch};
use crate::error::Error;
use crate::exec;
use crate::growth::{self, Certificate, TableMetric, CSV_HEADER};
use crate::hyperbolic::{gamma_n_length, pants_holonomy, thrice_punctured_holonomy, trace_to_length, HolonomyRep, PantsMetric};
use crate::intersection::{as_path, self_intersection};
use crate::ribbon::pants_base;
use crate::word::CyclicWord;
use crate::VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NOT_FOUND: i32 = 2;

#[derive(Debug, Parser, Serialize)]
#[command(name = "simplelift", version, about = "Simple lifts of curves on a pair of pants to finite covers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Self-intersection number of a curve on the pants.
    Intersect(IntersectArgs),
    /// Least degree of a cover in which the curve lifts to a simple closed curve.
    Degree(DegreeArgs),
    /// Enumerate, count or store connected covers of the rank-2 rose.
    Covers(CoversArgs),
    /// Geodesic lengths in a hyperbolic pants.
    Length(LengthArgs),
    /// Growth tables and lower-bound witnesses.
    Growth(GrowthArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct IntersectArgs {
    #[arg(long)]
    pub word: String,
}

#[derive(Debug, Args, Serialize)]
pub struct DegreeArgs {
    #[arg(long)]
    pub word: String,
    /// Largest degree searched; defaults to the self-intersection number plus 2.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Write the witness record (JSON Lines) to this file.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Read covers from the catalog directory, generating missing files.
    #[arg(long)]
    pub use_catalog: bool,
    #[arg(long, default_value = "covers-catalog")]
    pub catalog_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct CoversArgs {
    #[arg(long)]
    pub degree: usize,
    /// Print only the number of covers.
    #[arg(long)]
    pub count: bool,
    /// Write the catalog file for this degree.
    #[arg(long)]
    pub emit: bool,
    #[arg(long, default_value = "covers-catalog")]
    pub catalog_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct LengthArgs {
    /// Curve to measure; omit together with --n-max for a table over γₙ.
    #[arg(long)]
    pub word: Option<String>,
    /// Use the thrice-punctured sphere.
    #[arg(long, conflicts_with = "cuffs")]
    pub cusps: bool,
    /// Cuff lengths l1,l2,l3 (0 marks a cusp).
    #[arg(long, value_parser = parse_triple)]
    pub cuffs: Option<[f64; 3]>,
    /// Emit a table of γₙ lengths for n = 0..=N.
    #[arg(long)]
    pub n_max: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthMode {
    Table,
    Fs,
    Compact,
    Cusped,
    ThricePunctured,
    Threshold,
}

#[derive(Debug, Args, Serialize)]
pub struct GrowthArgs {
    #[arg(long, value_enum)]
    pub mode: GrowthMode,
    #[arg(long)]
    pub n_max: Option<u64>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Fill the exhaustive degree column for n up to this value.
    #[arg(long)]
    pub exhaustive_cap: Option<u64>,
    /// Cuff lengths for the table (default: thrice-punctured sphere).
    #[arg(long, value_parser = parse_triple)]
    pub cuffs: Option<[f64; 3]>,
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub l: Option<f64>,
    #[arg(long = "B")]
    #[serde(rename = "B")]
    pub bers: Option<f64>,
    #[arg(long = "D")]
    #[serde(rename = "D")]
    pub ortho: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub l_alpha: Option<f64>,
    #[arg(long)]
    pub l_beta: Option<f64>,
    /// Inputs come from a Bers pants decomposition.
    #[arg(long)]
    pub bers_pants: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

/// What a run prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn invalid(msg: impl std::fmt::Display) -> Self {
        Self { stdout: String::new(), stderr: format!("error: {msg}\n"), code: EXIT_INVALID }
    }
}

fn parse_triple(text: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|v: Vec<f64>| format!("expected three comma-separated lengths, got {}", v.len()))
}

fn jobs_width(jobs: usize) -> usize {
    if jobs == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        jobs
    }
}

fn envelope(config: &Command, result: Value) -> String {
    let mut v = json!({ "version": VERSION, "config": config });
    if let (Value::Object(out), Value::Object(extra)) = (&mut v, result) {
        out.extend(extra);
    }
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Parses arguments and runs one command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    let result = match &cli.command {
        Command::Intersect(a) => intersect(a),
        Command::Degree(a) => degree(a),
        Command::Covers(a) => covers(a),
        Command::Length(a) => length(a),
        Command::Growth(a) => growth_cmd(a),
    };
    match result {
        Ok(Reply::Json(v, code, stderr)) => Outcome { stdout: envelope(&cli.command, v), stderr, code },
        Ok(Reply::Text(s)) => Outcome::ok(s),
        Err(e) => Outcome::invalid(e),
    }
}

enum Reply {
    Json(Value, i32, String),
    Text(String),
}

fn json_ok(v: Value) -> Result<Reply, Error> {
    Ok(Reply::Json(v, EXIT_OK, String::new()))
}

fn parse_word(text: &str) -> Result<CyclicWord, Error> {
    CyclicWord::parse(text, 2)
}

fn intersect(a: &IntersectArgs) -> Result<Reply, Error> {
    let word = parse_word(&a.word)?;
    let iota = self_intersection(&word, &pants_base())?;
    json_ok(json!({ "word": word.to_string(), "intersection": iota, "simple": iota == 0 }))
}

fn degree(a: &DegreeArgs) -> Result<Reply, Error> {
    let word = parse_word(&a.word)?;
    let base = pants_base();
    let cap = match a.cap {
        Some(0) => return Err(Error::Domain("cap must be at least 1".into())),
        Some(c) => c,
        None => self_intersection(&word, &base)? + 2,
    };
    let mut notes = String::new();
    let search = exec::with_jobs(jobs_width(a.jobs), |mode| {
        if a.use_catalog {
            min_simple_lift_degree_with(&word, cap, |d| {
                let (covers, status) = catalog::load_or_build(&a.catalog_dir, d, mode)?;
                if let CatalogStatus::Regenerated { reason } = status {
                    let _ = writeln!(notes, "warning: regenerated degree-{d} catalog ({reason})");
                }
                simple_lift_among(&base, &word, &covers, mode)
            })
        } else {
            cover::min_simple_lift_degree(&base, &word, cap, mode)
        }
    })?;
    match search {
        LiftSearch::Found(w) => {
            let record = WitnessRecord::new(&word, &w)?;
            if let Some(path) = &a.witness {
                let line = serde_json::to_string(&record).expect("records serialize") + "\n";
                std::fs::write(path, line).map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
            }
            Ok(Reply::Json(
                json!({ "word": word.to_string(), "degree": w.degree(), "witness": record }),
                EXIT_OK,
                notes,
            ))
        }
        LiftSearch::NotFoundUpTo(cap) => Ok(Reply::Json(
            json!({ "word": word.to_string(), "degree": null, "not_found_up_to": cap }),
            EXIT_NOT_FOUND,
            notes,
        )),
    }
}

fn covers(a: &CoversArgs) -> Result<Reply, Error> {
    if a.degree == 0 {
        return Err(Error::Domain("degree must be at least 1".into()));
    }
    exec::with_jobs(jobs_width(a.jobs), |mode| {
        let expected = cover::hall_count(2, a.degree);
        if a.count && !a.emit {
            let count = cover::count_covers(2, a.degree, mode);
            return json_ok(json!({ "degree": a.degree, "count": count, "hall_count": expected.to_string() }));
        }
        let list = cover::covers_of_degree(2, a.degree, mode);
        if a.emit {
            let path = catalog::write_catalog(&a.catalog_dir, a.degree, &list)?;
            return json_ok(json!({
                "degree": a.degree,
                "count": list.len(),
                "hall_count": expected.to_string(),
                "catalog": path.display().to_string(),
            }));
        }
        let mut out = String::new();
        for c in &list {
            out.push_str(&serde_json::to_string(&CoverRecord::from_cover(c)?).expect("records serialize"));
            out.push('\n');
        }
        Ok(Reply::Text(out))
    })
}

fn metric_of(cusps: bool, cuffs: &Option<[f64; 3]>) -> Result<(Value, HolonomyRep), Error> {
    match (cusps, cuffs) {
        (_, Some(c)) => {
            let m = PantsMetric::new(c[0], c[1], c[2])?;
            Ok((json!({ "cuffs": m.cuffs }), pants_holonomy(&m)?))
        }
        (true, None) => Ok((json!("thrice-punctured"), thrice_punctured_holonomy())),
        (false, None) => Err(Error::Domain("give --cusps or --cuffs l1,l2,l3".into())),
    }
}

fn length(a: &LengthArgs) -> Result<Reply, Error> {
    let (metric, rep) = metric_of(a.cusps, &a.cuffs)?;
    if let Some(n_max) = a.n_max {
        let rows: Vec<(u64, f64, f64)> = (0..=n_max)
            .map(|n| {
                let trace = rep.a.mul(&rep.b.pow(n)).trace();
                Ok((n, trace, gamma_n_length(&rep, n)?))
            })
            .collect::<Result<_, Error>>()?;
        return match a.format.unwrap_or(Format::Csv) {
            Format::Csv => {
                let mut out = String::from("n,trace,length\n");
                for (n, t, l) in rows {
                    let _ = writeln!(out, "{n},{t},{l}");
                }
                Ok(Reply::Text(out))
            }
            Format::Json => json_ok(json!({
                "metric": metric,
                "rows": rows.iter().map(|(n, t, l)| json!({ "n": n, "trace": t, "length": l })).collect::<Vec<_>>(),
            })),
        };
    }
    let Some(text) = &a.word else {
        return Err(Error::Domain("give --word or --n-max".into()));
    };
    let word = parse_word(text)?;
    let trace = rep.image(&word)?.trace();
    let length = trace_to_length(trace)?;
    match a.format.unwrap_or(Format::Json) {
        Format::Json => json_ok(json!({ "word": word.to_string(), "metric": metric, "trace": trace, "length": length })),
        Format::Csv => Ok(Reply::Text(format!("word,trace,length\n{word},{trace},{length}\n"))),
    }
}

fn need(v: Option<f64>, flag: &str) -> Result<f64, Error> {
    v.ok_or_else(|| Error::Domain(format!("--{flag} is required in this mode")))
}

fn growth_cmd(a: &GrowthArgs) -> Result<Reply, Error> {
    let witness_reply = |certificate: Certificate, label: &str| -> Result<Reply, Error> {
        let outcome = growth::witness(need(a.l, "L")?, certificate)?;
        match a.format.unwrap_or(Format::Json) {
            Format::Json => json_ok(json!({ "label": label, "outcome": outcome })),
            Format::Csv => match outcome.witness() {
                Some(w) => Ok(Reply::Text(format!("{CSV_HEADER}\n{}\n", w.csv()))),
                None => Err(Error::Domain("L is below the smallest valid value".into())),
            },
        }
    };
    match a.mode {
        GrowthMode::Table => {
            let n_max = a.n_max.ok_or_else(|| Error::Domain("--n-max is required".into()))?;
            let metric = match &a.cuffs {
                Some(c) => TableMetric::Pants { cuffs: *c },
                None => TableMetric::ThricePunctured,
            };
            let rows = exec::with_jobs(jobs_width(a.jobs), |mode| growth::growth_table(n_max, metric, a.exhaustive_cap, mode))?;
            match a.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut out = format!("{CSV_HEADER}\n");
                    for r in &rows {
                        out.push_str(&r.csv());
                        out.push('\n');
                    }
                    Ok(Reply::Text(out))
                }
                Format::Json => json_ok(json!({ "metric": metric, "rows": rows })),
            }
        }
        GrowthMode::Fs => {
            let n = a.n.ok_or_else(|| Error::Domain("--n is required".into()))?;
            let (bound, word) = growth::f_s_lower(n);
            json_ok(json!({ "n": n, "f_s_lower": bound, "word": word.to_string() }))
        }
        GrowthMode::Compact => {
            let label = if a.bers_pants { "bers-pants" } else { "custom-pants" };
            witness_reply(
                Certificate::Compact {
                    bers: need(a.bers, "B")?,
                    eps: need(a.eps, "eps")?,
                    l_alpha: need(a.l_alpha, "l-alpha")?,
                    l_beta: need(a.l_beta, "l-beta")?,
                    ortho: need(a.ortho, "D")?,
                },
                label,
            )
        }
        GrowthMode::Cusped => witness_reply(
            Certificate::Cusped { eps: need(a.eps, "eps")?, s: need(a.s, "s")?, bers: need(a.bers, "B")? },
            "cusped",
        ),
        GrowthMode::ThricePunctured => {
            witness_reply(Certificate::ThricePunctured { eps: need(a.eps, "eps")? }, "thrice-punctured")
        }
        GrowthMode::Threshold => {
            let eps = need(a.eps, "eps")?;
            let n0 = growth::find_threshold_n0(eps)?;
            json_ok(json!({
                "eps": eps,
                "n0": n0,
                "scan_max": growth::THRESHOLD_SCAN_MAX,
                "defect_at_scan_max": growth::threshold_defect(growth::THRESHOLD_SCAN_MAX),
            }))
        }
    }
}

/// Checks a word against the pants before heavier work; used by tests.
pub fn validate_word(text: &str) -> Result<(), Error> {
    as_path(&parse_word(text)?, &pants_base()).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> Value {
        let out = run(std::iter::once("simplelift").chain(args.iter().copied()));
        assert_eq!(out.code, EXIT_OK, "{out:?}");
        serde_json::from_str(&out.stdout).unwrap()
    }

    #[test]
    fn intersect_outputs() {
        let v = run_ok(&["intersect", "--word", "abbbb"]);
        assert_eq!(v["intersection"], 4);
        assert_eq!(v["config"]["command"], "intersect");
        assert_eq!(v["version"], VERSION);
        let v = run_ok(&["intersect", "--word", "a"]);
        assert_eq!(v["simple"], true);
    }

    #[test]
    fn invalid_words_exit_one() {
        for w in ["abab", "aA", "xyz"] {
            let out = run(["simplelift", "intersect", "--word", w]);
            assert_eq!(out.code, EXIT_INVALID, "{w}");
            assert!(out.stdout.is_empty());
        }
        assert!(validate_word("abab").is_err());
    }

    #[test]
    fn degree_outputs() {
        let v = run_ok(&["degree", "--word", "abb", "--cap", "5", "--jobs", "1"]);
        assert_eq!(v["degree"], 3);
        let v = run_ok(&["degree", "--word", "a"]);
        assert_eq!(v["degree"], 1);
        let out = run(["simplelift", "degree", "--word", "abbbb", "--cap", "3"]);
        assert_eq!(out.code, EXIT_NOT_FOUND);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["not_found_up_to"], 3);
    }

    #[test]
    fn covers_count() {
        let v = run_ok(&["covers", "--degree", "3", "--count"]);
        assert_eq!(v["count"], 13);
        let out = run(["simplelift", "covers", "--degree", "2"]);
        assert_eq!(out.stdout.lines().count(), 3);
    }

    #[test]
    fn length_outputs() {
        let v = run_ok(&["length", "--cusps", "--word", "abbbb"]);
        assert!((v["length"].as_f64().unwrap() - 2.0 * 9f64.acosh()).abs() < 1e-12);
        assert_eq!(v["trace"], 18.0);
        let out = run(["simplelift", "length", "--word", "ab"]);
        assert_eq!(out.code, EXIT_INVALID);
        let v = run_ok(&["length", "--cuffs", "1, 1,1", "--word", "b"]);
        assert_eq!(v["config"]["cuffs"], json!([1.0, 1.0, 1.0]));
        assert_eq!(run(["simplelift", "length", "--cuffs", "1,1", "--word", "b"]).code, EXIT_INVALID);
    }

    #[test]
    fn growth_witness_json() {
        let v = run_ok(&[
            "growth", "--mode", "compact", "--L", "120", "--B", "2", "--eps", "0.5", "--l-alpha", "2", "--l-beta",
            "2", "--D", "1",
        ]);
        assert_eq!(v["label"], "custom-pants");
        assert_eq!(v["outcome"]["status"], "valid");
        assert_eq!(v["outcome"]["n"], 48);
        let v = run_ok(&["growth", "--mode", "threshold", "--eps", "1"]);
        assert!(v["n0"].as_u64().unwrap() <= 100);
    }
}
