use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use serde::Deserialize;
use toml::Spanned;

use super::{phenomenon_iri, Channel, ChannelMap, OpensvpError, ParamValue, SuiteConfig, TestConfig};
use crate::report::line_column;

#[derive(Deserialize)]
#[serde(untagged)]
enum ParamDoc {
    Integer(i64),
    Number(f64),
    Bool(bool),
    Text(String),
}

impl From<ParamDoc> for ParamValue {
    fn from(p: ParamDoc) -> Self {
        match p {
            ParamDoc::Integer(i) => ParamValue::Integer(i),
            ParamDoc::Number(n) => ParamValue::Number(n),
            ParamDoc::Bool(b) => ParamValue::Bool(b),
            ParamDoc::Text(t) => ParamValue::Text(t),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteDoc {
    suite: SuiteHeader,
    #[serde(default)]
    params: BTreeMap<String, ParamDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteHeader {
    name: Spanned<String>,
    #[serde(default)]
    tests: Vec<Spanned<String>>,
    #[serde(default)]
    suites: Vec<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TestDoc {
    test: TestHeader,
    #[serde(default)]
    params: BTreeMap<String, ParamDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TestHeader {
    name: Spanned<String>,
    script: String,
    standard: Option<String>,
    #[serde(default)]
    requires: Vec<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelMapDoc {
    time: String,
    start: Option<Spanned<String>>,
    #[serde(default)]
    channel: Vec<ChannelDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelDoc {
    column: String,
    phenomenon: Spanned<String>,
    unit: String,
    window: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ContextFile {
    organization: NamedDoc,
    dataset: NamedDoc,
    configuration: ConfigurationDoc,
    start: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NamedDoc {
    id: String,
    #[serde(alias = "title")]
    label: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigurationDoc {
    id: String,
    path: Option<String>,
}

/// Annotation context file: who owns the dataset, its id, and the system
/// configuration the tests ran on.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextDoc {
    pub organization_id: String,
    pub organization_label: Option<String>,
    pub dataset_id: String,
    pub dataset_title: Option<String>,
    pub system_config_id: String,
    /// Configuration file, relative to the context file.
    pub system_config_path: Option<String>,
    pub start: Option<DateTime<Utc>>,
}

fn syntax(text: &str, offset: usize, message: impl Into<String>) -> OpensvpError {
    let (line, column) = line_column(text, offset);
    OpensvpError::Syntax { line, column, message: message.into() }
}

fn from_toml<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, OpensvpError> {
    toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        syntax(text, offset, e.message().trim())
    })
}

fn non_empty(text: &str, field: &Spanned<String>, what: &str) -> Result<String, OpensvpError> {
    if field.get_ref().trim().is_empty() {
        return Err(syntax(text, field.span().start, format!("{what} must not be empty")));
    }
    Ok(field.get_ref().clone())
}

fn timestamp(text: &str, field: &Spanned<String>) -> Result<DateTime<Utc>, OpensvpError> {
    DateTime::parse_from_rfc3339(field.get_ref())
        .map(|t| t.with_timezone(&Utc))
        .map_err(|_| syntax(text, field.span().start, "expected an RFC 3339 timestamp with offset"))
}

fn params(doc: BTreeMap<String, ParamDoc>) -> BTreeMap<String, ParamValue> {
    doc.into_iter().map(|(k, v)| (k, v.into())).collect()
}

/// Parses a suite (STE) file. A suite listing itself among its nested
/// suites is rejected; deeper cycles need [`check_suite_tree`].
pub fn parse_suite(text: &str) -> Result<SuiteConfig, OpensvpError> {
    let doc: SuiteDoc = from_toml(text)?;
    let name = non_empty(text, &doc.suite.name, "suite name")?;
    let test_refs = doc.suite.tests.iter().map(|t| non_empty(text, t, "test reference")).collect::<Result<_, _>>()?;
    let nested_suite_refs: Vec<String> =
        doc.suite.suites.iter().map(|t| non_empty(text, t, "suite reference")).collect::<Result<_, _>>()?;
    if nested_suite_refs.contains(&name) {
        return Err(OpensvpError::CyclicSuite(vec![name.clone(), name]));
    }
    Ok(SuiteConfig {
        suite_name: name,
        test_refs,
        nested_suite_refs,
        global_params: params(doc.params),
    })
}

/// Parses a test (TST) file.
pub fn parse_test(text: &str) -> Result<TestConfig, OpensvpError> {
    let doc: TestDoc = from_toml(text)?;
    let name = non_empty(text, &doc.test.name, "test name")?;
    let required_phenomena = doc
        .test
        .requires
        .iter()
        .map(|r| phenomenon_iri(r.get_ref()).map_err(|e| syntax(text, r.span().start, e.to_string())))
        .collect::<Result<_, _>>()?;
    Ok(TestConfig {
        test_name: name,
        script_ref: doc.test.script,
        standard_ref: doc.test.standard,
        params: params(doc.params),
        required_phenomena,
    })
}

pub fn parse_channel_map(text: &str) -> Result<ChannelMap, OpensvpError> {
    let doc: ChannelMapDoc = from_toml(text)?;
    let start = doc.start.as_ref().map(|s| timestamp(text, s)).transpose()?;
    let mut seen = BTreeSet::new();
    let mut channels = Vec::new();
    for c in doc.channel {
        if !seen.insert(c.column.clone()) || c.column == doc.time {
            return Err(OpensvpError::Malformed(format!("column {:?} is mapped twice", c.column)));
        }
        if c.window.is_some_and(|w| !(w > 0.0 && w.is_finite())) {
            return Err(OpensvpError::Malformed(format!("column {:?}: window must be positive", c.column)));
        }
        let phenomenon = phenomenon_iri(c.phenomenon.get_ref())
            .map_err(|e| syntax(text, c.phenomenon.span().start, e.to_string()))?;
        channels.push(Channel { name: c.column, phenomenon, unit: c.unit, window: c.window });
    }
    Ok(ChannelMap { time_column: doc.time, start, channels })
}

pub fn parse_context(text: &str) -> Result<ContextDoc, OpensvpError> {
    let doc: ContextFile = from_toml(text)?;
    Ok(ContextDoc {
        organization_id: doc.organization.id,
        organization_label: doc.organization.label,
        dataset_id: doc.dataset.id,
        dataset_title: doc.dataset.label,
        system_config_id: doc.configuration.id,
        system_config_path: doc.configuration.path,
        start: doc.start.as_ref().map(|s| timestamp(text, s)).transpose()?,
    })
}

/// Checks that every nested suite reference below `root` resolves in
/// `suites` and that no suite includes itself transitively.
pub fn check_suite_tree(root: &SuiteConfig, suites: &[SuiteConfig]) -> Result<(), OpensvpError> {
    let by_name: BTreeMap<&str, &SuiteConfig> = suites.iter().map(|s| (s.suite_name.as_str(), s)).collect();
    fn visit<'a>(
        suite: &'a SuiteConfig,
        by_name: &BTreeMap<&str, &'a SuiteConfig>,
        path: &mut Vec<&'a str>,
        done: &mut BTreeSet<&'a str>,
    ) -> Result<(), OpensvpError> {
        if let Some(i) = path.iter().position(|n| *n == suite.suite_name) {
            let mut cycle: Vec<String> = path[i..].iter().map(|s| s.to_string()).collect();
            cycle.push(suite.suite_name.clone());
            return Err(OpensvpError::CyclicSuite(cycle));
        }
        if !done.insert(&suite.suite_name) {
            return Ok(());
        }
        path.push(&suite.suite_name);
        for r in &suite.nested_suite_refs {
            let child = by_name
                .get(r.as_str())
                .ok_or_else(|| OpensvpError::UnresolvedReference { kind: "suite", name: r.clone() })?;
            visit(child, by_name, path, done)?;
        }
        path.pop();
        Ok(())
    }
    visit(root, &by_name, &mut Vec::new(), &mut BTreeSet::new())
}
