//! Workflow provenance: templates (planned processes and variables),
//! execution accounts (activities, entities, agents), lineage queries and
//! reproducibility completeness checks.

mod bind;
mod completeness;
mod graph;
mod lineage;

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use thiserror::Error;

pub use bind::{bind_execution, Binding, BoundProcess};
pub use completeness::{
    check_completeness, check_completeness_weighted, default_profile, CompletenessReport, ProfileRule, RuleTally,
};
pub use graph::{accounts_from_rdf, template_to_rdf, templates_from_rdf, to_prov_rdf};
pub use lineage::{derivation_cycles, upstream};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProvError {
    #[error("{kind} {id} is referenced but not declared")]
    DanglingReference { kind: &'static str, id: String },
    #[error("invalid account {account}: {message}")]
    InvalidAccount { account: String, message: String },
    #[error("invalid template {template}: {message}")]
    InvalidTemplate { template: String, message: String },
    #[error("account refers to template {account:?}, not {template}")]
    TemplateMismatch { template: String, account: Option<String> },
    #[error("invalid timestamp {0:?}: expected RFC 3339 with a UTC offset")]
    Timestamp(String),
    #[error("malformed provenance graph: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum VariableKind {
    Data,
    Parameter,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TemplateVariable {
    pub id: String,
    pub kind: VariableKind,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TemplateProcess {
    pub id: String,
    pub label: Option<String>,
    pub consumes_variables: Vec<String>,
    pub produces_variables: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WorkflowTemplate {
    pub id: String,
    pub label: Option<String>,
    /// In execution order.
    pub processes: Vec<TemplateProcess>,
    pub variables: Vec<TemplateVariable>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum AgentKind {
    Person,
    Organization,
    SoftwareAgent,
}

impl AgentKind {
    pub fn name(self) -> &'static str {
        match self {
            AgentKind::Person => "person",
            AgentKind::Organization => "organization",
            AgentKind::SoftwareAgent => "softwareAgent",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [AgentKind::Person, AgentKind::Organization, AgentKind::SoftwareAgent]
            .into_iter()
            .find(|k| k.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Agent {
    pub id: String,
    pub label: Option<String>,
    pub kind: AgentKind,
}

/// Entities typed as datasets or log files count as test results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum EntityKind {
    Entity,
    Dataset,
    LogFile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Entity {
    pub id: String,
    pub label: Option<String>,
    pub kind: EntityKind,
    pub variable: Option<String>,
    pub derived_from: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Activity {
    pub id: String,
    pub label: Option<String>,
    pub template_process: Option<String>,
    pub agent: String,
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
    pub used: Vec<String>,
    pub generated: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExecutionAccount {
    pub id: String,
    pub label: Option<String>,
    pub template: Option<String>,
    pub activities: Vec<Activity>,
    pub entities: Vec<Entity>,
    pub agents: Vec<Agent>,
}

/// Parses an RFC 3339 timestamp. A missing offset is an error.
pub fn parse_timestamp(text: &str) -> Result<DateTime<Utc>, ProvError> {
    DateTime::parse_from_rfc3339(text.trim())
        .map(|t| t.with_timezone(&Utc))
        .map_err(|_| ProvError::Timestamp(text.to_owned()))
}

pub fn format_timestamp(t: &DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::AutoSi, true)
}

fn duplicates<'a>(ids: impl IntoIterator<Item = &'a str>) -> Option<&'a str> {
    let mut seen = BTreeSet::new();
    ids.into_iter().find(|id| !seen.insert(*id))
}

impl WorkflowTemplate {
    pub fn new(id: &str) -> Self {
        WorkflowTemplate {
            id: id.to_owned(),
            label: None,
            processes: Vec::new(),
            variables: Vec::new(),
        }
    }

    pub fn process(&self, id: &str) -> Option<&TemplateProcess> {
        self.processes.iter().find(|p| p.id == id)
    }

    /// Unique ids, declared variables, and no process consuming a variable
    /// that only a later process produces.
    pub fn validate(&self) -> Result<(), ProvError> {
        let bad = |message: String| ProvError::InvalidTemplate {
            template: self.id.clone(),
            message,
        };
        if let Some(id) = duplicates(self.processes.iter().map(|p| p.id.as_str())) {
            return Err(bad(format!("process {id} declared twice")));
        }
        if let Some(id) = duplicates(self.variables.iter().map(|v| v.id.as_str())) {
            return Err(bad(format!("variable {id} declared twice")));
        }
        let declared: BTreeSet<&str> = self.variables.iter().map(|v| v.id.as_str()).collect();
        let mut producer: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, p) in self.processes.iter().enumerate() {
            for v in p.consumes_variables.iter().chain(&p.produces_variables) {
                if !declared.contains(v.as_str()) {
                    return Err(ProvError::DanglingReference { kind: "variable", id: v.clone() });
                }
            }
            for v in &p.produces_variables {
                producer.entry(v).or_insert(i);
            }
        }
        for (i, p) in self.processes.iter().enumerate() {
            for v in &p.consumes_variables {
                if producer.get(v.as_str()).is_some_and(|&j| j >= i) {
                    return Err(bad(format!("process {} consumes {v} before it is produced", p.id)));
                }
            }
        }
        Ok(())
    }
}

impl ExecutionAccount {
    pub fn new(id: &str) -> Self {
        ExecutionAccount {
            id: id.to_owned(),
            label: None,
            template: None,
            activities: Vec::new(),
            entities: Vec::new(),
            agents: Vec::new(),
        }
    }

    pub fn activity(&self, id: &str) -> Option<&Activity> {
        self.activities.iter().find(|a| a.id == id)
    }

    pub fn entity(&self, id: &str) -> Option<&Entity> {
        self.entities.iter().find(|e| e.id == id)
    }

    /// Declared references, unique generation and ordered time intervals.
    /// With a template, every process and variable reference must resolve.
    pub fn validate(&self, template: Option<&WorkflowTemplate>) -> Result<(), ProvError> {
        let bad = |message: String| ProvError::InvalidAccount {
            account: self.id.clone(),
            message,
        };
        for (kind, dup) in [
            ("activity", duplicates(self.activities.iter().map(|a| a.id.as_str()))),
            ("entity", duplicates(self.entities.iter().map(|e| e.id.as_str()))),
            ("agent", duplicates(self.agents.iter().map(|a| a.id.as_str()))),
        ] {
            if let Some(id) = dup {
                return Err(bad(format!("{kind} {id} declared twice")));
            }
        }
        let entities: BTreeSet<&str> = self.entities.iter().map(|e| e.id.as_str()).collect();
        let agents: BTreeSet<&str> = self.agents.iter().map(|a| a.id.as_str()).collect();
        let dangling = |kind, id: &String| ProvError::DanglingReference { kind, id: id.clone() };

        let mut generated_by: BTreeMap<&str, &str> = BTreeMap::new();
        for a in &self.activities {
            if !agents.contains(a.agent.as_str()) {
                return Err(dangling("agent", &a.agent));
            }
            if a.end < a.start {
                return Err(bad(format!("activity {} ends before it starts", a.id)));
            }
            for e in a.used.iter().chain(&a.generated) {
                if !entities.contains(e.as_str()) {
                    return Err(dangling("entity", e));
                }
            }
            for e in &a.generated {
                if let Some(first) = generated_by.insert(e, &a.id) {
                    return Err(bad(format!("entity {e} generated by both {first} and {}", a.id)));
                }
            }
            if a.template_process.is_some() && self.template.is_none() {
                return Err(bad(format!("activity {} names a template process but the account has no template", a.id)));
            }
        }
        for e in &self.entities {
            for d in &e.derived_from {
                if !entities.contains(d.as_str()) {
                    return Err(dangling("entity", d));
                }
            }
            if e.variable.is_some() && self.template.is_none() {
                return Err(bad(format!("entity {} names a template variable but the account has no template", e.id)));
            }
        }
        if let Some(t) = template {
            if self.template.as_deref() != Some(t.id.as_str()) {
                return Err(ProvError::TemplateMismatch {
                    template: t.id.clone(),
                    account: self.template.clone(),
                });
            }
            for a in &self.activities {
                if let Some(p) = &a.template_process {
                    if t.process(p).is_none() {
                        return Err(dangling("template process", p));
                    }
                }
            }
            for e in &self.entities {
                if let Some(v) = &e.variable {
                    if !t.variables.iter().any(|x| &x.id == v) {
                        return Err(dangling("template variable", v));
                    }
                }
            }
        }
        Ok(())
    }
}

impl ExecutionAccount {
    /// Lists sorted by id, reference lists sorted.
    pub fn canonical(&self) -> Self {
        let mut c = self.clone();
        c.activities.sort_by(|a, b| a.id.cmp(&b.id));
        c.entities.sort_by(|a, b| a.id.cmp(&b.id));
        c.agents.sort_by(|a, b| a.id.cmp(&b.id));
        for a in &mut c.activities {
            a.used.sort();
            a.generated.sort();
        }
        for e in &mut c.entities {
            e.derived_from.sort();
        }
        c
    }
}
