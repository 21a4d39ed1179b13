//! Command-line front end.
//!
//! Three subcommands (`find-triples`, `verify`, `verify-lemma`) each print one
//! report envelope in JSON, CSV or a plain-text table. Exit codes are a stable
//! contract, see [`exit`].

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::quadfield::LemmaId;
use crate::survey::{find_triples, verify_lemma, verify_triple, Case, LemmaSummary, TripleReport};

pub const SCHEMA_VERSION: &str = "1";

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const SHORTFALL: i32 = 2;
    pub const ASSERTION_FAILURE: i32 = 3;
    pub const USAGE: i32 = 64;
    pub const BAD_INPUT: i32 = 65;
}

/// Column at which the table format wraps long expressions.
const WRAP_WIDTH: usize = 96;

#[derive(Debug, Parser)]
#[command(name = "mqunits", version, about = "Unit groups and 2-class numbers of Q(√2, √pq, √ps)")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Worker threads for multi-triple runs; output keeps input order.
    #[arg(long, default_value_t = 1, global = true)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the smallest triples (p, q, s) of a case, lexicographically.
    FindTriples {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        case: u8,
        /// Exclusive bound on all three primes.
        #[arg(long, default_value_t = 1000)]
        max_prime: u64,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Run the full pipeline on one or more triples.
    Verify {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        s: Option<u64>,
        /// Additional triples as `P,Q,S`; repeatable.
        #[arg(long = "triple", value_parser = parse_triple)]
        triples: Vec<(u64, u64, u64)>,
        /// CM parameter ℓ; repeatable.
        #[arg(long = "ell")]
        ells: Vec<u64>,
    },
    /// Check a quadratic-unit lemma on deterministic samples.
    VerifyLemma {
        #[arg(long)]
        lemma: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1000)]
        max_prime: u64,
    },
}

fn parse_triple(s: &str) -> std::result::Result<(u64, u64, u64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected P,Q,S, got {s:?}"));
    }
    let n = |x: &str| x.parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((n(parts[0])?, n(parts[1])?, n(parts[2])?))
}

/// Wrapper written for every successful (or partially successful) run.
#[derive(Debug, Serialize)]
pub struct ReportEnvelope<T: Serialize> {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub inputs: Value,
    pub results: Vec<T>,
    pub timing_ms: u128,
}

/// Result of one CLI invocation: text for stdout and stderr plus an exit code.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `args` (program name first), runs the command and writes its
/// output to the process streams.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let out = run(args);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    out.code
}

/// Like [`main_with_args`] but returns the output instead of printing it.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stderr: text, code, ..Default::default() }
            } else {
                Outcome { stdout: text, code, ..Default::default() }
            };
        }
    };
    if cli.jobs == 0 {
        return usage("--jobs must be at least 1");
    }
    let started = Instant::now();
    match cli.command {
        Command::FindTriples { case, max_prime, count } => {
            if count == 0 {
                return usage("--count must be at least 1");
            }
            let case = Case::from_number(case).expect("range checked by clap");
            run_find_triples(case, max_prime, count, cli.format, started)
        }
        Command::Verify { p, q, s, triples, ells } => {
            let mut all = Vec::new();
            match (p, q, s) {
                (Some(p), Some(q), Some(s)) => all.push((p, q, s)),
                (None, None, None) => {}
                _ => return usage("--p, --q and --s must be given together"),
            }
            all.extend(triples);
            if all.is_empty() {
                return usage("no triple given; use --p/--q/--s or --triple");
            }
            run_verify(&all, &ells, cli.jobs, cli.format, started)
        }
        Command::VerifyLemma { lemma, samples, max_prime } => {
            let lemma = match LemmaId::from_str(&lemma) {
                Ok(l) => l,
                Err(_) => return usage(&format!("unknown lemma {lemma:?}")),
            };
            if samples == 0 {
                return usage("--samples must be at least 1");
            }
            run_verify_lemma(lemma, samples, max_prime, cli.format, started)
        }
    }
}

fn usage(msg: &str) -> Outcome {
    Outcome { stderr: format!("error: {msg}\n"), code: exit::USAGE, ..Default::default() }
}

fn error_code(e: &Error) -> i32 {
    if e.is_assertion_failure() {
        exit::ASSERTION_FAILURE
    } else {
        exit::BAD_INPUT
    }
}

fn failure(e: &Error) -> Outcome {
    Outcome { stderr: format!("error: {e}\n"), code: error_code(e), ..Default::default() }
}

fn run_find_triples(case: Case, max_prime: u64, count: usize, format: Format, started: Instant) -> Outcome {
    let search = match find_triples(case, max_prime, count) {
        Ok(s) => s,
        Err(e) => return failure(&e),
    };
    let inputs = json!({ "case": case.number(), "max_prime": max_prime, "count": count });
    let mut out = Outcome::default();
    if search.shortfall {
        out.code = exit::SHORTFALL;
        let _ = writeln!(
            out.stderr,
            "warning: only {} of {count} case-{} triples below {max_prime}",
            search.triples.len(),
            case.number()
        );
    }
    #[derive(Serialize)]
    struct Row {
        case: u8,
        p: u64,
        q: u64,
        s: u64,
    }
    let rows: Vec<Row> =
        search.triples.iter().map(|&(p, q, s)| Row { case: case.number(), p, q, s }).collect();
    out.stdout = match format {
        Format::Json => envelope_json("find-triples", inputs, &rows, started),
        Format::Csv => to_csv(&rows),
        Format::Table => {
            let mut t = format!("case {} triples with primes < {max_prime}\n", case.number());
            let _ = writeln!(t, "{:>6} {:>6} {:>6}", "p", "q", "s");
            for r in &rows {
                let _ = writeln!(t, "{:>6} {:>6} {:>6}", r.p, r.q, r.s);
            }
            t
        }
    };
    out
}

fn run_verify(
    triples: &[(u64, u64, u64)],
    ells: &[u64],
    jobs: usize,
    format: Format,
    started: Instant,
) -> Outcome {
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(p) => p,
        Err(e) => return usage(&format!("cannot start {jobs} workers: {e}")),
    };
    // indexed collect keeps input order
    let results: Vec<Result<TripleReport>> =
        pool.install(|| triples.par_iter().map(|&(p, q, s)| verify_triple(p, q, s, ells)).collect());

    let mut out = Outcome::default();
    let mut reports = Vec::new();
    for ((p, q, s), r) in triples.iter().zip(results) {
        match r {
            Ok(rep) => {
                if !rep.passed {
                    out.code = out.code.max(exit::ASSERTION_FAILURE);
                    let names: Vec<&str> = rep.failed_checks().iter().map(|c| c.name.as_str()).collect();
                    let _ = writeln!(out.stderr, "({p}, {q}, {s}): failed checks: {}", names.join(", "));
                }
                reports.push(rep);
            }
            Err(e) => {
                out.code = out.code.max(error_code(&e));
                let _ = writeln!(out.stderr, "error: ({p}, {q}, {s}): {e}");
            }
        }
    }
    if reports.is_empty() {
        return out;
    }
    let inputs = json!({
        "triples": triples.iter().map(|&(p, q, s)| json!([p, q, s])).collect::<Vec<_>>(),
        "ell": ells,
    });
    out.stdout = match format {
        Format::Json => envelope_json("verify", inputs, &reports, started),
        Format::Csv => to_csv(&reports.iter().map(VerifyRow::from).collect::<Vec<_>>()),
        Format::Table => reports.iter().map(triple_table).collect::<Vec<_>>().join("\n"),
    };
    out
}

fn run_verify_lemma(lemma: LemmaId, samples: usize, max_prime: u64, format: Format, started: Instant) -> Outcome {
    let summary = match verify_lemma(lemma, samples, max_prime) {
        Ok(s) => s,
        Err(e) => return failure(&e),
    };
    let mut out = Outcome::default();
    if !summary.counterexamples.is_empty() {
        out.code = exit::ASSERTION_FAILURE;
        let _ = writeln!(out.stderr, "lemma {lemma}: {} potential counterexamples", summary.counterexamples.len());
    } else if summary.shortfall {
        out.code = exit::SHORTFALL;
        let _ = writeln!(
            out.stderr,
            "warning: lemma {lemma}: only {} of {samples} samples below {max_prime}",
            summary.tested
        );
    }
    let inputs = json!({ "lemma": lemma.as_str(), "samples": samples, "max_prime": max_prime });
    out.stdout = match format {
        Format::Json => envelope_json("verify-lemma", inputs, std::slice::from_ref(&summary), started),
        Format::Csv => to_csv(&[LemmaRow::from(&summary)]),
        Format::Table => lemma_table(&summary),
    };
    out
}

/// Serializes an envelope with every number turned into a decimal string.
/// `serde_json` maps are ordered by key, so the output is canonical.
fn envelope_json<T: Serialize>(command: &'static str, inputs: Value, results: &[T], started: Instant) -> String {
    let env = ReportEnvelope {
        schema_version: SCHEMA_VERSION,
        command,
        inputs,
        results: results.iter().collect(),
        timing_ms: started.elapsed().as_millis(),
    };
    let value = serde_json::to_value(&env).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&stringify_numbers(value)).expect("value serializes");
    s.push('\n');
    s
}

/// Replaces every JSON number by its decimal string.
pub fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_numbers).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, stringify_numbers(v))).collect()),
        other => other,
    }
}

fn to_csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("flat rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

#[derive(Serialize)]
struct VerifyRow {
    p: u64,
    q: u64,
    s: u64,
    case: u8,
    index_log2: u32,
    fourth_roots: usize,
    h2: String,
    matches_stated_system: bool,
    norm_cells_matched: usize,
    norm_cells: usize,
    passed: bool,
}

impl From<&TripleReport> for VerifyRow {
    fn from(r: &TripleReport) -> VerifyRow {
        VerifyRow {
            p: r.p,
            q: r.q,
            s: r.s,
            case: r.case_label.number(),
            index_log2: r.index_log2,
            fourth_roots: r.fourth_roots,
            h2: r.h2_l_plus.to_string(),
            matches_stated_system: r.matches_stated_system,
            norm_cells_matched: r.norm_tables.iter().filter(|c| c.matches).count(),
            norm_cells: r.norm_tables.len(),
            passed: r.passed,
        }
    }
}

#[derive(Serialize)]
struct LemmaRow {
    lemma: String,
    samples_requested: usize,
    max_prime: u64,
    tested: usize,
    skipped: usize,
    counterexamples: usize,
    shortfall: bool,
    passed: bool,
}

impl From<&LemmaSummary> for LemmaRow {
    fn from(s: &LemmaSummary) -> LemmaRow {
        LemmaRow {
            lemma: s.lemma_id.to_string(),
            samples_requested: s.samples_requested,
            max_prime: s.max_prime,
            tested: s.tested,
            skipped: s.skipped.len(),
            counterexamples: s.counterexamples.len(),
            shortfall: s.shortfall,
            passed: s.passed,
        }
    }
}

/// Joins `items` with `sep`, breaking lines only between items.
pub fn wrap_items(prefix: &str, items: &[String], sep: &str, width: usize) -> String {
    let indent = " ".repeat(prefix.chars().count());
    let mut out = String::from(prefix);
    let mut col = out.chars().count();
    for (i, item) in items.iter().enumerate() {
        let piece = if i + 1 < items.len() { format!("{item}{sep}") } else { item.clone() };
        let len = piece.chars().count();
        if i > 0 && col + len > width {
            out.truncate(out.trim_end().len());
            out.push('\n');
            out.push_str(&indent);
            col = indent.len();
        }
        out.push_str(&piece);
        col += len;
    }
    out
}

/// Splits a displayed element into its `±c√b` terms.
fn element_terms(s: &str) -> Vec<String> {
    let mut terms = Vec::new();
    let mut rest = s;
    let mut sign = "";
    loop {
        let next = [" + ", " - "].iter().filter_map(|sep| rest.find(sep)).min();
        match next {
            Some(i) => {
                terms.push(format!("{sign}{}", &rest[..i]));
                sign = if rest[i..].starts_with(" + ") { "+ " } else { "- " };
                rest = &rest[i + 3..];
            }
            None => {
                terms.push(format!("{sign}{rest}"));
                return terms;
            }
        }
    }
}

fn check_mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn triple_table(r: &TripleReport) -> String {
    let mut t = String::new();
    let _ = writeln!(
        t,
        "triple ({}, {}, {})  case {}  symbols {:?}  {}",
        r.p,
        r.q,
        r.s,
        r.case_label.number(),
        r.symbols,
        if r.passed { "PASSED" } else { "FAILED" }
    );
    let _ = writeln!(t, "quadratic units:");
    for u in &r.quad_units {
        let h = &r.quad_h2[&u.unit.d.to_string()];
        let _ = writeln!(t, "  ε_{:<4} h2={} (expected {})  {}", u.name, h.computed, h.expected, u.unit);
    }
    let labels: Vec<String> =
        std::iter::once(r.unit_system.torsion.to_string()).chain(r.unit_system.labels()).collect();
    let _ = writeln!(t, "{}", wrap_items("unit group E = ⟨", &labels, ", ", WRAP_WIDTH) + "⟩");
    let _ = writeln!(
        t,
        "index 2^{}, {} fourth roots, stated system {}",
        r.index_log2,
        r.fourth_roots,
        check_mark(r.matches_stated_system)
    );
    for g in r.unit_system.generators.iter().filter(|g| g.label.starts_with('√') || g.label.starts_with('⁴')) {
        let prefix = format!("  {} = ", g.label);
        let _ = writeln!(t, "{}", wrap_items(&prefix, &element_terms(&g.element.to_string()), " ", WRAP_WIDTH));
    }
    let _ = writeln!(t, "h2(L+) = {}", r.h2_l_plus);
    let matched = r.norm_tables.iter().filter(|c| c.matches).count();
    let _ = writeln!(t, "norm cells: {matched}/{} reproduced", r.norm_tables.len());
    for c in r.norm_tables.iter().filter(|c| !c.matches) {
        let _ = writeln!(t, "  table {} row {} column {}: expected {}, got {}", c.table, c.row, c.column, c.expected, c.computed);
    }
    let rc = &r.rank_check;
    let _ = writeln!(
        t,
        "rank check: N(ε2) = {}, (-1,p)_p = {}  {}",
        rc.norm_eps2,
        rc.hilbert_minus1_p,
        check_mark(rc.holds)
    );
    for (ell, cm) in &r.cm_outcomes {
        let _ = writeln!(
            t,
            "CM ℓ={ell}: η = {}, branch {}",
            cm.eta,
            cm.matched_theorem_branch.as_deref().unwrap_or("none")
        );
    }
    for c in &r.lemma_checks {
        let _ = writeln!(t, "  [{}] {}: {}", check_mark(c.passed), c.name, c.detail);
    }
    t
}

fn lemma_table(s: &LemmaSummary) -> String {
    let mut t = String::new();
    let _ = writeln!(
        t,
        "lemma {}: {} tested, {} skipped, {} counterexamples  {}",
        s.lemma_id,
        s.tested,
        s.skipped.len(),
        s.counterexamples.len(),
        if s.passed { "PASSED" } else { "FAILED" }
    );
    for sk in &s.skipped {
        let _ = writeln!(t, "  skipped {}{}: {}", sk.first, sk.second.map(|b| format!(",{b}")).unwrap_or_default(), sk.reason);
    }
    for c in &s.counterexamples {
        let _ = writeln!(t, "  counterexample {}{}: {}", c.first, c.second.map(|b| format!(",{b}")).unwrap_or_default(), c.error);
    }
    t
}
