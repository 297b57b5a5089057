//! Python bindings: `import lamainfer`.

use std::collections::BTreeMap;
use std::path::Path;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use lama_infer::driver::{self, Report, RunStats};
use lama_infer::solver::{self, SolveOptions};
use lama_infer::types::{parse_constraint, parse_type, types_equivalent, Printer};

fn options(
    max_steps: u64,
    max_answers: usize,
    max_constructors: Option<usize>,
    prune: bool,
) -> SolveOptions {
    SolveOptions {
        max_answers: max_answers.max(1),
        fuel: max_steps,
        max_constructors,
        prune,
    }
}

fn stats_map(s: &RunStats) -> BTreeMap<&'static str, u64> {
    BTreeMap::from([
        ("constraints-generated", s.constraints_generated),
        ("constraints-dispatched", s.constraints_dispatched),
        ("engine-unifications", s.engine_unifications),
        ("answers-requested", s.answers_requested),
        ("answers-found", s.answers_found),
        ("fuel-used", s.fuel_used),
    ])
}

/// Label table for S-expression constructors.
#[pyclass(name = "TagTable", module = "lamainfer", skip_from_py_object)]
#[derive(Clone, Default)]
struct PyTagTable {
    inner: lama_infer::types::TagTable,
}

#[pymethods]
impl PyTagTable {
    #[new]
    fn new() -> Self {
        Self::default()
    }

    /// Id of `label/arity`, adding it if new.
    fn intern(&mut self, label: &str, arity: usize) -> u32 {
        self.inner.intern(label, arity)
    }

    fn lookup(&self, label: &str, arity: usize) -> Option<u32> {
        self.inner.lookup(label, arity)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        let entries: Vec<String> = self
            .inner
            .entries()
            .map(|(_, l, a)| format!("{l}/{a}"))
            .collect();
        format!("TagTable([{}])", entries.join(", "))
    }
}

/// Result of checking one program.
#[pyclass(name = "Report", module = "lamainfer", frozen)]
struct PyReport {
    #[pyo3(get)]
    verdict: &'static str,
    #[pyo3(get)]
    exit_code: i32,
    #[pyo3(get)]
    bindings: Vec<(String, String)>,
    #[pyo3(get)]
    failing: Option<String>,
    #[pyo3(get)]
    error: Option<String>,
    #[pyo3(get)]
    constraints: Vec<String>,
    stats: RunStats,
    text: String,
}

impl From<Report> for PyReport {
    fn from(r: Report) -> Self {
        let mut p = Printer::new(&r.table);
        PyReport {
            verdict: r.verdict.as_str(),
            exit_code: r.verdict.exit_code(),
            bindings: r.rendered_bindings(),
            failing: r
                .failing
                .as_ref()
                .map(|c| Printer::new(&r.table).constraint(c)),
            error: r.error.clone(),
            constraints: r.constraints.iter().map(|c| p.constraint(c)).collect(),
            stats: r.stats,
            text: r.render(),
        }
    }
}

#[pymethods]
impl PyReport {
    #[getter]
    fn stats(&self) -> BTreeMap<&'static str, u64> {
        stats_map(&self.stats)
    }

    /// The text printed by `lama-infer check`.
    fn render(&self) -> String {
        self.text.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(verdict={:?}, bindings={})",
            self.verdict,
            self.bindings.len()
        )
    }
}

/// Infer types for a program given as source text.
#[pyfunction]
#[pyo3(signature = (src, max_steps = 1_000_000, max_answers = 1, max_constructors = None, prune = true))]
fn check_source(
    py: Python<'_>,
    src: &str,
    max_steps: u64,
    max_answers: usize,
    max_constructors: Option<usize>,
    prune: bool,
) -> PyReport {
    let opts = options(max_steps, max_answers, max_constructors, prune);
    py.detach(|| driver::check_source(src, &opts)).into()
}

#[pyfunction]
#[pyo3(signature = (path, max_steps = 1_000_000, max_answers = 1, max_constructors = None, prune = true))]
fn check_file(
    py: Python<'_>,
    path: &str,
    max_steps: u64,
    max_answers: usize,
    max_constructors: Option<usize>,
    prune: bool,
) -> PyReport {
    let opts = options(max_steps, max_answers, max_constructors, prune);
    py.detach(|| driver::check_file(Path::new(path), &opts))
        .into()
}

/// Rendered root types and constraints before solving.
#[pyfunction]
fn emit_constraints(src: &str) -> PyResult<String> {
    driver::emit_constraints(src).map_err(PyValueError::new_err)
}

/// Solves constraints written in the rendering syntax and returns the root
/// types of each answer.
#[pyfunction]
#[pyo3(signature = (constraints, roots, tags, max_steps = 1_000_000, max_answers = 1, max_constructors = None, prune = true))]
#[allow(clippy::too_many_arguments)]
fn solve(
    py: Python<'_>,
    constraints: Vec<String>,
    roots: Vec<String>,
    tags: &mut PyTagTable,
    max_steps: u64,
    max_answers: usize,
    max_constructors: Option<usize>,
    prune: bool,
) -> PyResult<Vec<Vec<String>>> {
    let cs = constraints
        .iter()
        .map(|c| parse_constraint(c, &mut tags.inner, true))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let rs = roots
        .iter()
        .map(|t| parse_type(t, &tags.inner))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let opts = options(max_steps, max_answers, max_constructors, prune);
    let table = tags.inner.clone();
    let out = py.detach(|| driver::with_big_stack(|| solver::solve(&cs, &rs, &table, &opts)));
    Ok(out
        .answers
        .iter()
        .map(|a| {
            let mut p = Printer::new(&table);
            a.iter().map(|t| p.ty(t)).collect()
        })
        .collect())
}

/// Equality of two rendered types up to recursive-type unfolding.
#[pyfunction]
fn types_equal(a: &str, b: &str, tags: &PyTagTable) -> PyResult<bool> {
    let parse =
        |s: &str| parse_type(s, &tags.inner).map_err(|e| PyValueError::new_err(e.to_string()));
    Ok(types_equivalent(&parse(a)?, &parse(b)?))
}

/// Checks a directory of `.lama` files against their `.expected` files.
#[pyfunction]
#[pyo3(signature = (dir, max_steps = 1_000_000))]
fn run_corpus(
    py: Python<'_>,
    dir: &str,
    max_steps: u64,
) -> PyResult<BTreeMap<&'static str, Py<PyAny>>> {
    let opts = options(max_steps, 1, None, true);
    let summary = py
        .detach(|| driver::run_corpus(Path::new(dir), &opts))
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(BTreeMap::from([
        (
            "passed",
            summary.passed().into_pyobject(py)?.into_any().unbind(),
        ),
        (
            "failed",
            summary.failed().into_pyobject(py)?.into_any().unbind(),
        ),
        (
            "skipped",
            summary.skipped().into_pyobject(py)?.into_any().unbind(),
        ),
        (
            "report",
            summary.render().into_pyobject(py)?.into_any().unbind(),
        ),
    ]))
}

#[pymodule]
fn lamainfer(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTagTable>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(check_source, m)?)?;
    m.add_function(wrap_pyfunction!(check_file, m)?)?;
    m.add_function(wrap_pyfunction!(emit_constraints, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(types_equal, m)?)?;
    m.add_function(wrap_pyfunction!(run_corpus, m)?)?;
    Ok(())
}
