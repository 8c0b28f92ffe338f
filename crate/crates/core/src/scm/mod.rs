//! Multi-domain system configurations: validation, RDF export and import,
//! and configuration diffs.

mod diff;
mod graph;
mod input;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::ns::scm;
use crate::rdf::{is_absolute_iri, Iri};
use crate::report::Finding;
use crate::vocab::Violation;

pub use diff::{diff_configurations, AttributeChange, ConfigDiff};
pub use graph::{config_iri, from_rdf, to_rdf};
pub use input::parse_config;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScmError {
    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid configuration: {}", summarize(.0))]
    InvalidConfiguration(Vec<Finding>),
    #[error("graph violates configuration shapes: {}", summarize(.0))]
    ShapeViolation(Vec<Violation>),
    #[error("graph contains no system configuration")]
    EmptyConfiguration,
    #[error("graph contains {0} system configurations, expected one")]
    MultipleConfigurations(usize),
    #[error("malformed configuration: {0}")]
    Malformed(String),
}

fn summarize<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Role {
    SuT,
    TestEquipment,
    Infrastructure,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::SuT => "SuT",
            Role::TestEquipment => "TestEquipment",
            Role::Infrastructure => "Infrastructure",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [Role::SuT, Role::TestEquipment, Role::Infrastructure]
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(name))
    }

    pub fn iri(self) -> Iri {
        Iri::from_static(&format!("{}{}", scm::NS, self.name()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum AttrValue {
    Number(f64),
    Text(String),
}

impl fmt::Display for AttrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrValue::Number(n) => write!(f, "{n}"),
            AttrValue::Text(t) => f.write_str(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Attribute {
    pub name: String,
    pub value: AttrValue,
    pub unit: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectionPoint {
    pub id: String,
    pub domain: String,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemNode {
    pub id: String,
    /// A `scm:` local name such as `PVInverter`, or an absolute IRI.
    pub system_type: String,
    pub role: Option<Role>,
    pub label: Option<String>,
    pub connection_points: Vec<ConnectionPoint>,
    pub attributes: Vec<Attribute>,
}

impl SystemNode {
    pub fn point(&self, id: &str) -> Option<&ConnectionPoint> {
        self.connection_points.iter().find(|p| p.id == id)
    }

    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Endpoint {
    pub system: String,
    pub point: String,
}

impl Endpoint {
    pub fn new(system: &str, point: &str) -> Self {
        Endpoint {
            system: system.to_owned(),
            point: point.to_owned(),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.system, self.point)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectionEdge {
    pub id: String,
    pub a: Endpoint,
    pub b: Endpoint,
    pub domain: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemConfiguration {
    pub id: String,
    pub is_test_setup: bool,
    pub systems: Vec<SystemNode>,
    pub connections: Vec<ConnectionEdge>,
    pub domains: BTreeSet<String>,
}

/// `scm:` local name or absolute IRI for a domain, system type or role id.
pub(crate) fn term_iri(id: &str) -> Iri {
    if is_absolute_iri(id) {
        Iri::new(id).unwrap_or_else(|_| Iri::from_static(&format!("{}{}", scm::NS, id)))
    } else {
        Iri::from_static(&format!("{}{}", scm::NS, id))
    }
}

/// Inverse of [`term_iri`].
pub(crate) fn term_id(iri: &Iri) -> String {
    match iri.as_str().strip_prefix(scm::NS) {
        Some(local) if crate::rdf::is_plain_local_name(local) => local.to_owned(),
        _ => iri.as_str().to_owned(),
    }
}

/// Identifiers become IRI path segments and `scm:` local names.
pub fn is_valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_'))
}

fn is_valid_term_id(id: &str) -> bool {
    crate::rdf::is_plain_local_name(id) || (is_absolute_iri(id) && Iri::new(id).is_ok())
}

impl SystemConfiguration {
    pub fn new(id: &str) -> Self {
        SystemConfiguration {
            id: id.to_owned(),
            is_test_setup: false,
            systems: Vec::new(),
            connections: Vec::new(),
            domains: BTreeSet::new(),
        }
    }

    pub fn system(&self, id: &str) -> Option<&SystemNode> {
        self.systems.iter().find(|s| s.id == id)
    }

    pub fn endpoint_domain(&self, e: &Endpoint) -> Option<&str> {
        self.system(&e.system)?.point(&e.point).map(|p| p.domain.as_str())
    }

    /// Canonical ordering: systems, points, attributes and connections by
    /// id or name, connection endpoints ascending.
    pub fn canonical(&self) -> Self {
        let mut c = self.clone();
        c.systems.sort_by(|a, b| a.id.cmp(&b.id));
        for s in &mut c.systems {
            s.connection_points.sort_by(|a, b| a.id.cmp(&b.id));
            s.attributes.sort_by(|a, b| a.name.cmp(&b.name));
        }
        c.connections.sort_by(|a, b| a.id.cmp(&b.id));
        for e in &mut c.connections {
            if e.b < e.a {
                std::mem::swap(&mut e.a, &mut e.b);
            }
        }
        c
    }

    /// Domains referenced by connection points and connections.
    pub fn used_domains(&self) -> BTreeSet<String> {
        self.systems
            .iter()
            .flat_map(|s| s.connection_points.iter().map(|p| p.domain.clone()))
            .chain(self.connections.iter().map(|c| c.domain.clone()))
            .collect()
    }
}

/// Structural checks. Findings are sorted, so the result does not depend on
/// the order of systems, points or connections in the input.
pub fn validate_configuration(cfg: &SystemConfiguration) -> Vec<Finding> {
    let mut out = Vec::new();
    let cfg_subject = format!("configuration {}", cfg.id);
    if !is_valid_id(&cfg.id) {
        out.push(Finding::violation("scm-invalid-id", &cfg_subject, format!("invalid identifier {:?}", cfg.id)));
    }
    for d in &cfg.domains {
        if !is_valid_term_id(d) {
            out.push(Finding::violation("scm-invalid-id", &cfg_subject, format!("invalid domain identifier {d:?}")));
        }
    }

    let mut system_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for s in &cfg.systems {
        *system_counts.entry(&s.id).or_default() += 1;
    }
    for (id, n) in &system_counts {
        if *n > 1 {
            out.push(Finding::violation("scm-duplicate-id", format!("system {id}"), format!("system id used {n} times")));
        }
    }

    let mut has_sut = false;
    for s in &cfg.systems {
        let subject = format!("system {}", s.id);
        has_sut |= s.role == Some(Role::SuT);
        if !is_valid_id(&s.id) {
            out.push(Finding::violation("scm-invalid-id", &subject, format!("invalid identifier {:?}", s.id)));
        }
        if !is_valid_term_id(&s.system_type) {
            out.push(Finding::violation("scm-invalid-type", &subject, format!("invalid system type {:?}", s.system_type)));
        }
        let mut seen = BTreeSet::new();
        for p in &s.connection_points {
            let psubject = format!("point {}.{}", s.id, p.id);
            if !seen.insert(&p.id) {
                out.push(Finding::violation("scm-duplicate-id", &psubject, "connection point id repeated in system"));
            }
            if !is_valid_id(&p.id) {
                out.push(Finding::violation("scm-invalid-id", &psubject, format!("invalid identifier {:?}", p.id)));
            }
            if !cfg.domains.contains(&p.domain) {
                out.push(Finding::violation("scm-undeclared-domain", &psubject, format!("domain {} is not declared", p.domain)));
            }
        }
        let mut names = BTreeSet::new();
        for a in &s.attributes {
            if !names.insert(&a.name) {
                out.push(Finding::violation("scm-duplicate-attribute", &subject, format!("attribute {} repeated", a.name)));
            }
            if !is_valid_id(&a.name) {
                out.push(Finding::violation("scm-invalid-id", &subject, format!("invalid attribute name {:?}", a.name)));
            }
            if matches!(a.value, AttrValue::Number(n) if !n.is_finite()) {
                out.push(Finding::violation("scm-invalid-value", &subject, format!("attribute {} is not finite", a.name)));
            }
        }
    }

    let mut connection_counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut connected: BTreeSet<&str> = BTreeSet::new();
    for c in &cfg.connections {
        *connection_counts.entry(&c.id).or_default() += 1;
        let subject = format!("connection {}", c.id);
        if !is_valid_id(&c.id) {
            out.push(Finding::violation("scm-invalid-id", &subject, format!("invalid identifier {:?}", c.id)));
        }
        if c.a == c.b {
            out.push(Finding::violation("scm-self-connection", &subject, format!("both endpoints are {}", c.a)));
        }
        if !cfg.domains.contains(&c.domain) {
            out.push(Finding::violation("scm-undeclared-domain", &subject, format!("domain {} is not declared", c.domain)));
        }
        for e in [&c.a, &c.b] {
            match cfg.endpoint_domain(e) {
                None => out.push(Finding::violation("scm-dangling-endpoint", &subject, format!("endpoint {e} does not exist"))),
                Some(d) if d != c.domain => out.push(Finding::violation(
                    "scm-domain-mismatch",
                    &subject,
                    format!("endpoint {e} is in domain {d}, connection is in {}", c.domain),
                )),
                Some(_) => {}
            }
            connected.insert(&e.system);
        }
    }
    for (id, n) in &connection_counts {
        if *n > 1 {
            out.push(Finding::violation(
                "scm-duplicate-id",
                format!("connection {id}"),
                format!("connection id used {n} times"),
            ));
        }
    }
    for id in system_counts.keys() {
        if !connected.contains(id) {
            out.push(Finding::warning("scm-isolated-system", format!("system {id}"), "system has no connections"));
        }
    }
    if cfg.is_test_setup && !has_sut && !cfg.systems.is_empty() {
        out.push(Finding::warning("scm-missing-sut", &cfg_subject, "test setup designates no system under test"));
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests;
