use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};

use super::log::offset;
use super::{check_suite_tree, MeasurementTrace, OpensvpError, ParamValue, SuiteConfig, TestConfig};
use crate::ns::{annot, htd, prov, rdf, rdfs, xsd};
use crate::prov::format_timestamp;
use crate::rdf::{BaseIri, Graph, Iri, Literal, Term};
use crate::scm::SystemConfiguration;

/// One CSV log of a test run.
#[derive(Debug, Clone, PartialEq)]
pub struct LogInput {
    pub test: String,
    /// Path as recorded in the graph, relative to the dataset.
    pub path: String,
    pub sha256: String,
    pub trace: MeasurementTrace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationContext {
    pub organization_id: String,
    pub organization_label: Option<String>,
    pub dataset_id: String,
    pub dataset_title: Option<String>,
    pub system_config_id: String,
    /// Merged into the graph when present.
    pub system_config: Option<SystemConfiguration>,
    /// Start of traces that carry no absolute time of their own.
    pub start: Option<DateTime<Utc>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationInput {
    pub suite: SuiteConfig,
    /// Suites reachable from `suite` through nested references.
    pub nested: Vec<SuiteConfig>,
    pub tests: Vec<TestConfig>,
    pub logs: Vec<LogInput>,
    pub context: AnnotationContext,
}

fn p(iri: &str) -> Iri {
    Iri::new(iri).expect("vocabulary constant")
}

fn t(iri: &str) -> Term {
    Term::Iri(p(iri))
}

fn text(s: &str) -> Term {
    Term::string(s)
}

fn param_literal(v: &ParamValue) -> Literal {
    match v {
        ParamValue::Integer(i) => Literal::integer(*i),
        ParamValue::Number(n) => Literal::decimal(*n),
        ParamValue::Bool(b) => Literal::boolean(*b),
        ParamValue::Text(s) => Literal::string(s.clone()),
    }
}

fn date_time(at: DateTime<Utc>) -> Literal {
    Literal::typed(format_timestamp(&at), p(xsd::DATE_TIME))
}

/// Builds the annotation graph: organization, dataset, log files with one
/// measurement per channel, the suite and test specifications, and one
/// test execution per log.
pub fn annotate(input: &AnnotationInput, base: &BaseIri) -> Result<Graph, OpensvpError> {
    let ctx = &input.context;
    let unresolved = |kind, name: &str| OpensvpError::UnresolvedReference { kind, name: name.to_owned() };

    check_suite_tree(&input.suite, &input.nested)?;
    let mut tests: BTreeMap<&str, &TestConfig> = BTreeMap::new();
    for test in &input.tests {
        if tests.insert(&test.test_name, test).is_some() {
            return Err(OpensvpError::Malformed(format!("test {:?} is given twice", test.test_name)));
        }
    }
    let suites: Vec<&SuiteConfig> = std::iter::once(&input.suite).chain(&input.nested).collect();
    for s in &suites {
        for r in &s.test_refs {
            if !tests.contains_key(r.as_str()) {
                return Err(unresolved("test", r));
            }
        }
    }
    for log in &input.logs {
        if !tests.contains_key(log.test.as_str()) {
            return Err(unresolved("test", &log.test));
        }
    }

    let mut g = Graph::with_standard_prefixes();
    let a = p(rdf::TYPE);
    let label = p(rdfs::LABEL);

    let org = base.mint(&["org", &ctx.organization_id]);
    let dataset = base.mint(&["dataset", &ctx.dataset_id]);
    g.add(org.clone(), &a, t(annot::ORGANIZATION));
    g.add(org.clone(), &a, t(prov::AGENT));
    g.add(org.clone(), &label, text(ctx.organization_label.as_deref().unwrap_or(&ctx.organization_id)));
    g.add(org.clone(), &p(annot::OWNS), dataset.clone());
    g.add(org.clone(), &p(annot::PROVIDES), dataset.clone());
    g.add(dataset.clone(), &a, t(annot::DATASET));
    g.add(dataset.clone(), &a, t(prov::ENTITY));
    g.add(dataset.clone(), &label, text(ctx.dataset_title.as_deref().unwrap_or(&ctx.dataset_id)));
    g.add(dataset.clone(), &p(prov::WAS_ATTRIBUTED_TO), org.clone());

    let config = crate::scm::config_iri(base, &ctx.system_config_id);
    if let Some(cfg) = &ctx.system_config {
        if cfg.id != ctx.system_config_id {
            return Err(OpensvpError::Malformed(format!(
                "context names configuration {:?} but the configuration file has id {:?}",
                ctx.system_config_id, cfg.id
            )));
        }
        let cg = crate::scm::to_rdf(cfg, base).map_err(|e| OpensvpError::Malformed(e.to_string()))?;
        g.extend_from(&cg);
    }

    let suite_iri = |name: &str| base.mint(&["suite", name]);
    let test_iri = |name: &str| base.mint(&["test", name]);
    for s in &suites {
        if s.test_refs.is_empty() && s.nested_suite_refs.is_empty() {
            continue;
        }
        let node = suite_iri(&s.suite_name);
        g.add(node.clone(), &a, t(htd::TEST_CASE));
        g.add(node.clone(), &label, text(&s.suite_name));
        for r in &s.nested_suite_refs {
            g.add(node.clone(), &p(htd::INCLUDES_SUITE), suite_iri(r));
        }
        for r in &s.test_refs {
            g.add(node.clone(), &p(htd::HAS_SPECIFICATION), test_iri(r));
        }
    }

    for test in tests.values() {
        let node = test_iri(&test.test_name);
        g.add(node.clone(), &a, t(htd::TEST_SPECIFICATION));
        g.add(node.clone(), &label, text(&test.test_name));
        g.add(node.clone(), &p(htd::SCRIPT_REF), text(&test.script_ref));
        if let Some(std) = &test.standard_ref {
            g.add(node.clone(), &p(htd::STANDARD_REF), text(std));
        }
        let mut params: BTreeMap<&str, &ParamValue> =
            input.suite.global_params.iter().map(|(k, v)| (k.as_str(), v)).collect();
        params.extend(test.params.iter().map(|(k, v)| (k.as_str(), v)));
        for (name, value) in params {
            let param = base.mint(&["test", &test.test_name, "param", name]);
            g.add(node.clone(), &p(htd::HAS_PARAMETER), param.clone());
            g.add(param.clone(), &a, t(htd::TEST_PARAMETER));
            g.add(param.clone(), &p(htd::PARAMETER_NAME), text(name));
            g.add(param, &p(htd::PARAMETER_VALUE), param_literal(value));
        }
        for ph in &test.required_phenomena {
            g.add(node.clone(), &p(htd::REQUIRES_PHENOMENON), ph.clone());
        }
        let experiment = base.mint(&["dataset", &ctx.dataset_id, "experiment", &test.test_name]);
        g.add(node.clone(), &p(htd::HAS_EXPERIMENT), experiment.clone());
        g.add(experiment.clone(), &a, t(htd::EXPERIMENT_SPECIFICATION));
        g.add(experiment, &p(htd::USES_SYSTEM_CONFIGURATION), config.clone());
    }

    let mut interval: Option<(DateTime<Utc>, DateTime<Utc>)> = None;
    let mut units = BTreeSet::new();
    for (i, log) in input.logs.iter().enumerate() {
        let n = (i + 1).to_string();
        let run = format!("{}-{n}", ctx.dataset_id);
        let file = base.mint(&["dataset", &ctx.dataset_id, "log", &n]);
        let execution = base.mint(&["execution", &run]);
        g.add(dataset.clone(), &p(annot::CONTAINS_LOG_FILE), file.clone());
        g.add(file.clone(), &a, t(annot::LOG_FILE));
        g.add(file.clone(), &a, t(prov::ENTITY));
        g.add(file.clone(), &label, text(log.path.rsplit('/').next().unwrap_or(&log.path)));
        g.add(file.clone(), &p(annot::FILE_PATH), text(&log.path));
        g.add(file.clone(), &p(annot::SHA256), text(&log.sha256));
        g.add(file.clone(), &p(annot::SAMPLE_COUNT), Literal::integer(log.trace.len() as i64));
        g.add(file.clone(), &p(prov::WAS_GENERATED_BY), execution.clone());

        let start = log.trace.start.or(ctx.start);
        for c in &log.trace.channels {
            let m = base.mint(&["measurement", &run, &c.name]);
            let unit = base.mint(&["unit", &c.unit]);
            g.add(file.clone(), &p(annot::STORES_MEASUREMENT), m.clone());
            g.add(m.clone(), &a, t(annot::MEASUREMENT));
            g.add(m.clone(), &p(annot::CHANNEL_NAME), text(&c.name));
            g.add(m.clone(), &p(annot::RECORDS_PHENOMENON), c.phenomenon.clone());
            g.add(m.clone(), &p(annot::HAS_UNIT), unit.clone());
            if let Some(w) = c.window {
                g.add(m.clone(), &p(annot::AGGREGATION_WINDOW), Literal::decimal(w));
            }
            if let Some(s) = start {
                g.add(m, &p(annot::HAS_TIMESTAMP), date_time(s));
            }
            if units.insert(c.unit.clone()) {
                g.add(unit.clone(), &a, t(annot::UNIT));
                g.add(unit, &label, text(&c.unit));
            }
        }

        g.add(execution.clone(), &a, t(htd::TEST_EXECUTION));
        g.add(execution.clone(), &a, t(prov::ACTIVITY));
        g.add(execution.clone(), &label, text(&format!("{} run {n}", log.test)));
        g.add(execution.clone(), &p(htd::EXECUTES_SPECIFICATION), test_iri(&log.test));
        g.add(execution.clone(), &p(htd::EXECUTED_ON_CONFIGURATION), config.clone());
        g.add(execution.clone(), &p(htd::RECORDED_IN), file.clone());
        g.add(execution.clone(), &p(prov::WAS_ASSOCIATED_WITH), org.clone());
        if let Some(s) = start {
            let e = offset(s, log.trace.duration());
            g.add(execution.clone(), &p(prov::STARTED_AT_TIME), date_time(s));
            g.add(execution, &p(prov::ENDED_AT_TIME), date_time(e));
            interval = Some(match interval {
                None => (s, e),
                Some((a0, b0)) => (a0.min(s), b0.max(e)),
            });
        }
    }

    if !input.logs.is_empty() {
        let compile = base.mint(&["dataset", &ctx.dataset_id, "compilation"]);
        g.add(dataset.clone(), &p(prov::WAS_GENERATED_BY), compile.clone());
        g.add(compile.clone(), &a, t(prov::ACTIVITY));
        g.add(compile.clone(), &label, text(&format!("compile {}", ctx.dataset_id)));
        g.add(compile.clone(), &p(prov::WAS_ASSOCIATED_WITH), org);
        for i in 1..=input.logs.len() {
            g.add(compile.clone(), &p(prov::USED), base.mint(&["dataset", &ctx.dataset_id, "log", &i.to_string()]));
        }
        if let Some((s, e)) = interval {
            g.add(compile.clone(), &p(prov::STARTED_AT_TIME), date_time(s));
            g.add(compile, &p(prov::ENDED_AT_TIME), date_time(e));
        }
    }
    Ok(g)
}
