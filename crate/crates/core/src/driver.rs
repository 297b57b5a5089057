//! Checking whole programs and corpora; shared by the binary and the
//! Python bindings.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::frontend::load;
use crate::infer::{infer_program, GenResult};
use crate::solver::{solve, SolveOptions, SolveOutcome};
use crate::types::{parse_type, types_equivalent, AtomicConstraint, Printer, TagTable, TypeTerm};

const STACK_SIZE: usize = 256 * 1024 * 1024;

/// Runs `f` on a thread with a large stack; deep types recurse deeply.
pub fn with_big_stack<T, F>(f: F) -> T
where
    F: FnOnce() -> T + Send,
    T: Send,
{
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(STACK_SIZE)
            .spawn_scoped(s, f)
            .expect("spawn checker thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Typed,
    IllTyped,
    Unknown,
    Malformed,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Typed => 0,
            Verdict::IllTyped => 1,
            Verdict::Unknown => 2,
            Verdict::Malformed => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Typed => "typed",
            Verdict::IllTyped => "ill-typed",
            Verdict::Unknown => "unknown",
            Verdict::Malformed => "malformed",
        }
    }

    pub fn from_name(s: &str) -> Option<Verdict> {
        [
            Verdict::Typed,
            Verdict::IllTyped,
            Verdict::Unknown,
            Verdict::Malformed,
        ]
        .into_iter()
        .find(|v| v.as_str() == s)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub constraints_generated: u64,
    pub constraints_dispatched: u64,
    pub engine_unifications: u64,
    pub answers_requested: u64,
    pub answers_found: u64,
    pub fuel_used: u64,
}

impl RunStats {
    fn entries(&self) -> [(&'static str, u64); 6] {
        [
            ("constraints-generated", self.constraints_generated),
            ("constraints-dispatched", self.constraints_dispatched),
            ("engine-unifications", self.engine_unifications),
            ("answers-requested", self.answers_requested),
            ("answers-found", self.answers_found),
            ("fuel-used", self.fuel_used),
        ]
    }

    /// One `key=value` line per counter.
    pub fn to_lines(&self) -> String {
        self.entries()
            .iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let map: serde_json::Map<String, serde_json::Value> = self
            .entries()
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        serde_json::Value::Object(map).to_string()
    }
}

/// Everything known about one checked program.
#[derive(Clone, Debug)]
pub struct Report {
    pub verdict: Verdict,
    /// Top-level names with their types from the first answer.
    pub bindings: Vec<(String, TypeTerm)>,
    /// Earliest generated constraint whose prefix is already unsatisfiable.
    pub failing: Option<AtomicConstraint>,
    pub error: Option<String>,
    pub constraints: Vec<AtomicConstraint>,
    pub table: TagTable,
    pub stats: RunStats,
}

impl Report {
    fn malformed(error: String) -> Report {
        Report {
            verdict: Verdict::Malformed,
            bindings: Vec::new(),
            failing: None,
            error: Some(error),
            constraints: Vec::new(),
            table: TagTable::new(),
            stats: RunStats::default(),
        }
    }

    /// Bindings rendered with one shared variable namer.
    pub fn rendered_bindings(&self) -> Vec<(String, String)> {
        let mut p = Printer::new(&self.table);
        self.bindings
            .iter()
            .map(|(n, t)| (n.clone(), p.ty(t)))
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = format!("verdict: {}\n", self.verdict.as_str());
        match self.verdict {
            Verdict::Typed => {
                for (n, t) in self.rendered_bindings() {
                    writeln!(out, "{n} : {t}").unwrap();
                }
            }
            Verdict::IllTyped => {
                if let Some(c) = &self.failing {
                    writeln!(out, "failing: {}", Printer::new(&self.table).constraint(c)).unwrap();
                }
            }
            Verdict::Unknown => writeln!(
                out,
                "reason: fuel exhausted after {} steps",
                self.stats.fuel_used
            )
            .unwrap(),
            Verdict::Malformed => {
                writeln!(out, "error: {}", self.error.as_deref().unwrap_or("")).unwrap()
            }
        }
        out
    }
}

/// Parses, generates constraints and solves; never panics on bad input.
pub fn check_source(src: &str, opts: &SolveOptions) -> Report {
    match load(src) {
        Err(e) => Report::malformed(e.to_string()),
        Ok(resolved) => {
            let gen = infer_program(&resolved);
            with_big_stack(|| solve_generated(&gen, opts))
        }
    }
}

pub fn check_file(path: &Path, opts: &SolveOptions) -> Report {
    match fs::read_to_string(path) {
        Ok(src) => check_source(&src, opts),
        Err(e) => Report::malformed(format!("{}: {e}", path.display())),
    }
}

/// Generated root types and constraints, rendered; the frontend error
/// message for malformed programs.
pub fn emit_constraints(src: &str) -> Result<String, String> {
    let resolved = load(src).map_err(|e| e.to_string())?;
    let gen = infer_program(&resolved);
    let mut p = Printer::new(&gen.table);
    let mut out = String::new();
    for (n, t) in &gen.roots {
        writeln!(out, "{n} : {}", p.ty(t)).unwrap();
    }
    for c in &gen.constraints {
        writeln!(out, "{}", p.constraint(c)).unwrap();
    }
    Ok(out)
}

fn solve_generated(gen: &GenResult, opts: &SolveOptions) -> Report {
    let roots: Vec<TypeTerm> = gen.roots.iter().map(|(_, t)| t.clone()).collect();
    let out = solve(&gen.constraints, &roots, &gen.table, opts);
    let stats = RunStats {
        constraints_generated: gen.constraints.len() as u64,
        constraints_dispatched: out.dispatched,
        engine_unifications: out.unifications,
        answers_requested: opts.max_answers as u64,
        answers_found: out.answers.len() as u64,
        fuel_used: out.steps,
    };
    let mut report = Report {
        verdict: Verdict::Typed,
        bindings: Vec::new(),
        failing: None,
        error: None,
        constraints: gen.constraints.clone(),
        table: gen.table.clone(),
        stats,
    };
    if let Some(first) = out.answers.first() {
        report.bindings = gen
            .roots
            .iter()
            .map(|(n, _)| n.to_string())
            .zip(first.iter().cloned())
            .collect();
    } else if out.fuel_exhausted() {
        report.verdict = Verdict::Unknown;
    } else {
        report.verdict = Verdict::IllTyped;
        report.failing = first_failing(gen, opts);
    }
    report
}

/// Binary search for the shortest unsatisfiable prefix of the constraints.
fn first_failing(gen: &GenResult, opts: &SolveOptions) -> Option<AtomicConstraint> {
    let opts = SolveOptions {
        max_answers: 1,
        ..opts.clone()
    };
    let fails = |k: usize| -> bool {
        let out: SolveOutcome = solve(&gen.constraints[..k], &[], &gen.table, &opts);
        out.answers.is_empty() && !out.fuel_exhausted()
    };
    let n = gen.constraints.len();
    if n == 0 {
        return None;
    }
    let (mut lo, mut hi) = (1, n);
    if !fails(n) {
        return None;
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if fails(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(gen.constraints[lo - 1].clone())
}

/// Contents of a `.expected` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub verdict: Verdict,
    /// `name : type` lines, type text unparsed.
    pub bindings: Vec<(String, String)>,
}

pub fn parse_expectation(text: &str) -> Result<Expectation, String> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let first = lines.next().ok_or("empty expectation")?;
    let v = first
        .strip_prefix("verdict:")
        .ok_or("first line must be `verdict: ...`")?
        .trim();
    let verdict = Verdict::from_name(v).ok_or_else(|| format!("unknown verdict `{v}`"))?;
    let mut bindings = Vec::new();
    for l in lines {
        let (n, t) = l
            .split_once(" : ")
            .ok_or_else(|| format!("expected `name : type`, got `{l}`"))?;
        bindings.push((n.trim().to_string(), t.trim().to_string()));
    }
    Ok(Expectation { verdict, bindings })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mismatch {
    Differs(String),
    BadExpectation(String),
}

/// Compares a report with an expectation: verdict kind, then each listed
/// binding up to μ-unfolding.
pub fn compare(report: &Report, exp: &Expectation) -> Result<(), Mismatch> {
    if report.verdict != exp.verdict {
        return Err(Mismatch::Differs(format!(
            "expected {}, got {}",
            exp.verdict.as_str(),
            report.verdict.as_str()
        )));
    }
    let actual = report.rendered_bindings();
    for (name, want) in &exp.bindings {
        let Some((_, got)) = actual.iter().find(|(n, _)| n == name) else {
            return Err(Mismatch::Differs(format!("no binding `{name}`")));
        };
        let want_t = parse_type(want, &report.table)
            .map_err(|e| Mismatch::BadExpectation(format!("type of `{name}`: {e}")))?;
        let got_t = parse_type(got, &report.table)
            .map_err(|e| Mismatch::Differs(format!("cannot reparse `{got}`: {e}")))?;
        if !types_equivalent(&want_t, &got_t) {
            return Err(Mismatch::Differs(format!(
                "`{name}`: expected {want}, got {got}"
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntryStatus {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub file: PathBuf,
    pub verdict: Verdict,
    pub status: EntryStatus,
    pub stats: RunStats,
}

#[derive(Clone, Debug, Default)]
pub struct CorpusSummary {
    pub entries: Vec<CorpusEntry>,
}

impl CorpusSummary {
    pub fn passed(&self) -> usize {
        self.count(|s| matches!(s, EntryStatus::Pass))
    }

    pub fn failed(&self) -> usize {
        self.count(|s| matches!(s, EntryStatus::Fail(_)))
    }

    pub fn skipped(&self) -> usize {
        self.count(|s| matches!(s, EntryStatus::Skipped(_)))
    }

    fn count(&self, f: impl Fn(&EntryStatus) -> bool) -> usize {
        self.entries.iter().filter(|e| f(&e.status)).count()
    }

    pub fn totals(&self) -> RunStats {
        let mut t = RunStats::default();
        for e in &self.entries {
            t.constraints_generated += e.stats.constraints_generated;
            t.constraints_dispatched += e.stats.constraints_dispatched;
            t.engine_unifications += e.stats.engine_unifications;
            t.answers_requested += e.stats.answers_requested;
            t.answers_found += e.stats.answers_found;
            t.fuel_used += e.stats.fuel_used;
        }
        t
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let name = e
                .file
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            match &e.status {
                EntryStatus::Pass => writeln!(out, "PASS {name} ({})", e.verdict.as_str()),
                EntryStatus::Fail(why) => writeln!(out, "FAIL {name}: {why}"),
                EntryStatus::Skipped(why) => writeln!(out, "SKIP {name}: {why}"),
            }
            .unwrap();
        }
        writeln!(
            out,
            "files={} passed={} failed={} skipped={}",
            self.entries.len(),
            self.passed(),
            self.failed(),
            self.skipped()
        )
        .unwrap();
        out
    }
}

/// Checks every `.lama` file of `dir` (sorted by name) against its sibling
/// `.expected` file.
pub fn run_corpus(dir: &Path, opts: &SolveOptions) -> std::io::Result<CorpusSummary> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "lama"))
        .collect();
    files.sort();
    let mut summary = CorpusSummary::default();
    for file in files {
        let report = check_file(&file, opts);
        let status = match fs::read_to_string(file.with_extension("expected")) {
            Err(_) => EntryStatus::Skipped("missing .expected file".into()),
            Ok(text) => match parse_expectation(&text) {
                Err(e) => EntryStatus::Skipped(format!("corrupt .expected file: {e}")),
                Ok(exp) => match compare(&report, &exp) {
                    Ok(()) => EntryStatus::Pass,
                    Err(Mismatch::Differs(e)) => EntryStatus::Fail(e),
                    Err(Mismatch::BadExpectation(e)) => {
                        EntryStatus::Skipped(format!("corrupt .expected file: {e}"))
                    }
                },
            },
        };
        summary.entries.push(CorpusEntry {
            file,
            verdict: report.verdict,
            status,
            stats: report.stats,
        });
    }
    Ok(summary)
}
