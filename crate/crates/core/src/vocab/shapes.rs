use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::rdf::{Iri, Term};
use crate::store::Store;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Violation,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Violation => "violation",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    MinCount { property: Iri, n: usize },
    MaxCount { property: Iri, n: usize },
    ValueIn { property: Iri, values: BTreeSet<Iri> },
    DatatypeIs { property: Iri, datatype: Iri },
}

impl Constraint {
    pub fn property(&self) -> &Iri {
        match self {
            Constraint::MinCount { property, .. }
            | Constraint::MaxCount { property, .. }
            | Constraint::ValueIn { property, .. }
            | Constraint::DatatypeIs { property, .. } => property,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeRule {
    pub id: String,
    pub target_class: Iri,
    pub constraint: Constraint,
    pub severity: Severity,
    pub message: String,
}

fn iri(text: &str) -> Iri {
    Iri::new(text).unwrap_or_else(|e| panic!("shape rule: {e}"))
}

/// The constructors panic on invalid IRI text; they are meant for rule
/// tables written in code.
impl ShapeRule {
    pub fn new(id: &str, target_class: &str, constraint: Constraint, message: &str) -> Self {
        ShapeRule {
            id: id.to_owned(),
            target_class: iri(target_class),
            constraint,
            severity: Severity::Violation,
            message: message.to_owned(),
        }
    }

    pub fn warning(mut self) -> Self {
        self.severity = Severity::Warning;
        self
    }

    pub fn min_count(id: &str, target_class: &str, property: &str, n: usize, message: &str) -> Self {
        let property = iri(property);
        Self::new(id, target_class, Constraint::MinCount { property, n }, message)
    }

    pub fn max_count(id: &str, target_class: &str, property: &str, n: usize, message: &str) -> Self {
        let property = iri(property);
        Self::new(id, target_class, Constraint::MaxCount { property, n }, message)
    }

    pub fn value_in(id: &str, target_class: &str, property: &str, values: &[&str], message: &str) -> Self {
        let property = iri(property);
        let values = values.iter().map(|v| iri(v)).collect();
        Self::new(id, target_class, Constraint::ValueIn { property, values }, message)
    }

    pub fn datatype_is(id: &str, target_class: &str, property: &str, datatype: &str, message: &str) -> Self {
        let property = iri(property);
        let datatype = iri(datatype);
        Self::new(id, target_class, Constraint::DatatypeIs { property, datatype }, message)
    }

    /// Whether `focus` satisfies this rule in `store`.
    pub fn holds_for(&self, store: &Store, focus: &Term) -> bool {
        let values = store.objects(focus, self.constraint.property());
        match &self.constraint {
            Constraint::MinCount { n, .. } => values.len() >= *n,
            Constraint::MaxCount { n, .. } => values.len() <= *n,
            Constraint::ValueIn { values: allowed, .. } => {
                values.iter().all(|v| v.as_iri().is_some_and(|i| allowed.contains(i)))
            }
            Constraint::DatatypeIs { datatype, .. } => values
                .iter()
                .all(|v| v.as_literal().is_some_and(|l| l.datatype() == datatype)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    pub rule_id: String,
    pub focus_node: Term,
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {}: {}", self.severity, self.rule_id, self.focus_node, self.message)
    }
}

/// One violation per (rule, focus node) breach, sorted by rule id then node.
pub fn check_shapes(store: &Store, rules: &[ShapeRule]) -> Vec<Violation> {
    let mut out: Vec<Violation> = rules
        .iter()
        .flat_map(|rule| {
            store
                .instances_of(&rule.target_class)
                .into_iter()
                .filter(|focus| !rule.holds_for(store, focus))
                .map(|focus| Violation {
                    rule_id: rule.id.clone(),
                    focus_node: focus,
                    severity: rule.severity,
                    message: rule.message.clone(),
                })
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}
