//! Python module `testkg`: graphs, queries, shape and completeness checks,
//! configuration diffs, sequence evaluation and annotation.
//!
//! Reports come back as plain dicts with the same layout as the JSON reports
//! of the command-line tool.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use testkg_core::en50549::{apr_spec, evaluate as run_evaluation, nor_spec, EvalOptions, SpecKind, TestSequenceSpec};
use testkg_core::fixtures::generate_synthetic_trace as synthetic_trace;
use testkg_core::opensvp::{annotate_sources, parse_channel_map, parse_log, write_log, AnnotationSources, LogSource};
use testkg_core::prov::{check_completeness_weighted, default_profile, ProfileRule};
use testkg_core::rdf::{self, BaseIri, Term};
use testkg_core::report::{Finding, Report};
use testkg_core::scm::{diff_configurations, parse_config};
use testkg_core::turtle::{parse_turtle as parse, serialize_turtle};
use testkg_core::vocab::{all_rules, all_vocabularies, check_shapes, emit_vocabulary};

create_exception!(testkg, TestkgError, PyException, "Raised for invalid input to any testkg function.");

fn err(e: impl std::fmt::Display) -> PyErr {
    TestkgError::new_err(e.to_string())
}

fn report_dict<'py>(py: Python<'py>, report: &Report) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (report.to_json(),))
}

/// An RDF graph.
#[pyclass(module = "testkg")]
pub struct Graph {
    inner: rdf::Graph,
}

#[pymethods]
impl Graph {
    #[new]
    #[pyo3(signature = (turtle = ""))]
    fn new(turtle: &str) -> PyResult<Self> {
        Ok(Graph { inner: parse(turtle).map_err(err)? })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("<Graph with {} triples>", self.inner.len())
    }

    /// Deterministic Turtle text.
    fn to_turtle(&self) -> String {
        serialize_turtle(&self.inner)
    }

    /// `(subject, predicate, object)` in N-Triples term syntax, sorted.
    fn triples(&self) -> Vec<(String, String, String)> {
        self.inner
            .iter()
            .map(|t| (t.subject().to_string(), Term::Iri(t.predicate().clone()).to_string(), t.object().to_string()))
            .collect()
    }

    fn isomorphic(&self, other: PyRef<'_, Graph>) -> PyResult<bool> {
        rdf::isomorphic(&self.inner, &other.inner).map_err(err)
    }

    /// Adds every triple of `other`; returns how many were new.
    fn merge(&mut self, other: PyRef<'_, Graph>) -> usize {
        self.inner.extend_from(&other.inner)
    }
}

/// An indexed triple store.
#[pyclass(module = "testkg")]
pub struct Store {
    inner: testkg_core::store::Store,
}

#[pymethods]
impl Store {
    #[new]
    #[pyo3(signature = (graph = None))]
    fn new(graph: Option<PyRef<'_, Graph>>) -> Self {
        let inner = match graph {
            Some(g) => testkg_core::store::Store::from_graph(&g.inner),
            None => testkg_core::store::Store::new(),
        };
        Store { inner }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Loads a graph; returns how many triples were new.
    fn load(&mut self, graph: PyRef<'_, Graph>) -> usize {
        self.inner.load(&graph.inner)
    }

    /// Runs a SELECT query. Each row maps variable names to terms in
    /// N-Triples syntax.
    fn query<'py>(&self, py: Python<'py>, text: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let result = self.inner.query(text).map_err(err)?;
        result
            .rows
            .iter()
            .map(|row| {
                let d = PyDict::new(py);
                for (v, t) in result.variables.iter().zip(row) {
                    d.set_item(v, t.to_string())?;
                }
                Ok(d)
            })
            .collect()
    }

    /// Shape validation against every vocabulary rule.
    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let findings = check_shapes(&self.inner, &all_rules()).into_iter().map(Finding::from);
        report_dict(py, &Report::new("validation").with_findings(findings).status_from_findings())
    }

    /// Completeness report for `rules` (ids `R1` to `R7`; all by default).
    #[pyo3(signature = (rules = None))]
    fn check_completeness<'py>(&self, py: Python<'py>, rules: Option<Vec<String>>) -> PyResult<Bound<'py, PyAny>> {
        let profile = match rules {
            None => default_profile(),
            Some(ids) => ids
                .iter()
                .map(|id| ProfileRule::builtin(id).ok_or_else(|| err(format!("unknown rule {id:?}"))))
                .collect::<PyResult<_>>()?,
        };
        let report = check_completeness_weighted(&self.inner, &profile, &Default::default()).to_report();
        report_dict(py, &report)
    }

    /// Entities upstream of `iri` in the provenance graph, sorted.
    fn upstream(&self, iri: &str) -> PyResult<Vec<String>> {
        let start = Term::iri(iri).map_err(err)?;
        Ok(testkg_core::prov::upstream(&self.inner, &start).iter().map(Term::value_text).collect())
    }
}

#[pyfunction]
fn parse_turtle(text: &str) -> PyResult<Graph> {
    Graph::new(text)
}

/// Diff report of two configuration documents.
#[pyfunction]
fn diff_configs<'py>(py: Python<'py>, a: &str, b: &str) -> PyResult<Bound<'py, PyAny>> {
    let a = parse_config(a).map_err(err)?;
    let b = parse_config(b).map_err(err)?;
    report_dict(py, &diff_configurations(&a, &b).to_report())
}

fn spec(kind: &str, un: Option<f64>, pn: Option<f64>, tolerance: Option<f64>) -> PyResult<TestSequenceSpec> {
    let mut s = match SpecKind::from_short_name(kind).map_err(err)? {
        SpecKind::NormalOperatingRange => {
            let s = nor_spec(un.ok_or_else(|| err("nor needs un"))?).map_err(err)?;
            match pn {
                Some(p) => s.with_nominal_power(p).map_err(err)?,
                None => s,
            }
        }
        SpecKind::ActivePowerReduction => {
            let s = apr_spec(pn.ok_or_else(|| err("apr needs pn"))?).map_err(err)?;
            match un {
                Some(u) => s.with_nominal_voltage(u).map_err(err)?,
                None => s,
            }
        }
    };
    if let Some(t) = tolerance {
        s = s.with_tolerance(t);
    }
    s.validate().map_err(err)?;
    Ok(s)
}

/// Verdict report of a CSV log against the `nor` or `apr` sequence.
#[pyfunction]
#[pyo3(signature = (csv, channel_map, kind, un = None, pn = None, tolerance = None, breaker = None))]
#[allow(clippy::too_many_arguments)]
fn evaluate<'py>(
    py: Python<'py>,
    csv: &str,
    channel_map: &str,
    kind: &str,
    un: Option<f64>,
    pn: Option<f64>,
    tolerance: Option<f64>,
    breaker: Option<String>,
) -> PyResult<Bound<'py, PyAny>> {
    let s = spec(kind, un, pn, tolerance)?;
    let trace = parse_log(csv, &parse_channel_map(channel_map).map_err(err)?).map_err(err)?;
    let opts = EvalOptions { connectivity_channel: breaker, ..EvalOptions::default() };
    report_dict(py, &run_evaluation(&trace, &s, &opts).map_err(err)?.to_report())
}

/// CSV text of a seeded synthetic trace for the `nor` or `apr` sequence.
#[pyfunction]
#[pyo3(signature = (kind, nominal, sample_rate = 1.0, noise = 0.0, disconnect_at = None, seed = 0))]
fn generate_synthetic_trace(
    kind: &str,
    nominal: f64,
    sample_rate: f64,
    noise: f64,
    disconnect_at: Option<f64>,
    seed: u64,
) -> PyResult<String> {
    let s = match SpecKind::from_short_name(kind).map_err(err)? {
        SpecKind::NormalOperatingRange => spec(kind, Some(nominal), None, None)?,
        SpecKind::ActivePowerReduction => spec(kind, None, Some(nominal), None)?,
    };
    Ok(write_log(&synthetic_trace(&s, sample_rate, noise, disconnect_at, seed).map_err(err)?))
}

/// Annotation graph of one campaign. `logs` holds `(test, path, csv)`
/// triples; the first suite is the root.
#[pyfunction]
#[pyo3(signature = (suites, tests, logs, channel_map, context, config = None, base = None))]
fn annotate(
    suites: Vec<String>,
    tests: Vec<String>,
    logs: Vec<(String, String, String)>,
    channel_map: String,
    context: String,
    config: Option<String>,
    base: Option<&str>,
) -> PyResult<Graph> {
    let base = match base {
        Some(b) => BaseIri::new(b).map_err(err)?,
        None => BaseIri::default(),
    };
    let src = AnnotationSources {
        suites,
        tests,
        logs: logs.into_iter().map(|(test, path, csv)| LogSource { test, path, csv }).collect(),
        channel_map,
        context,
        config,
    };
    Ok(Graph { inner: annotate_sources(&src, &base).map_err(err)? })
}

/// Turtle text of every vocabulary, keyed by short name.
#[pyfunction]
fn emit_vocabularies() -> PyResult<Vec<(String, String)>> {
    all_vocabularies()
        .into_iter()
        .map(|v| Ok((v.name.clone(), serialize_turtle(&emit_vocabulary(&v).map_err(err)?))))
        .collect()
}

#[pymodule]
fn testkg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TestkgError", m.py().get_type::<TestkgError>())?;
    m.add_class::<Graph>()?;
    m.add_class::<Store>()?;
    m.add_function(wrap_pyfunction!(parse_turtle, m)?)?;
    m.add_function(wrap_pyfunction!(diff_configs, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(generate_synthetic_trace, m)?)?;
    m.add_function(wrap_pyfunction!(annotate, m)?)?;
    m.add_function(wrap_pyfunction!(emit_vocabularies, m)?)?;
    Ok(())
}
