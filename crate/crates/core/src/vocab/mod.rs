//! Vocabulary declarations, their RDF emission and a small shape-rule checker.

mod defs;
mod shapes;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::ns::{owl, rdf, rdfs};
use crate::rdf::{Graph, Iri, Literal, Term};

pub use defs::{
    all_vocabularies, annotation_vocabulary, htd_vocabulary, prov_vocabulary, scm_vocabulary, DOMAINS, PHENOMENA, ROLES,
    SYSTEM_TYPES,
};
pub use shapes::{check_shapes, Constraint, Severity, ShapeRule, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VocabError {
    #[error("inconsistent vocabulary {vocabulary}: {message}")]
    InconsistentVocabulary { vocabulary: String, message: String },
}

/// Target of a property domain/range or an individual's class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermRef {
    /// A class declared in the same vocabulary, by local name.
    Local(String),
    /// A datatype IRI such as `xsd:decimal`.
    Datatype(Iri),
    /// A class from another vocabulary.
    External(Iri),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecl {
    pub namespace: String,
    pub local_name: String,
    pub label: String,
    pub comment: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDecl {
    pub namespace: String,
    pub local_name: String,
    pub domain: TermRef,
    pub range: TermRef,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndividualDecl {
    pub namespace: String,
    pub local_name: String,
    pub class: TermRef,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    /// Short name, also used as the prefix label and file stem.
    pub name: String,
    pub namespace: String,
    pub classes: Vec<ClassDecl>,
    pub properties: Vec<PropertyDecl>,
    pub individuals: Vec<IndividualDecl>,
    pub rules: Vec<ShapeRule>,
}

impl ClassDecl {
    pub fn iri(&self) -> Iri {
        Iri::from_static(&format!("{}{}", self.namespace, self.local_name))
    }
}

impl PropertyDecl {
    pub fn iri(&self) -> Iri {
        Iri::from_static(&format!("{}{}", self.namespace, self.local_name))
    }

    pub fn is_datatype_property(&self) -> bool {
        matches!(self.range, TermRef::Datatype(_))
    }
}

impl IndividualDecl {
    pub fn iri(&self) -> Iri {
        Iri::from_static(&format!("{}{}", self.namespace, self.local_name))
    }
}

impl Vocabulary {
    pub fn new(name: &str, namespace: &str) -> Self {
        Vocabulary {
            name: name.to_owned(),
            namespace: namespace.to_owned(),
            classes: Vec::new(),
            properties: Vec::new(),
            individuals: Vec::new(),
            rules: Vec::new(),
        }
    }

    pub fn class(&mut self, local_name: &str, label: &str, comment: &str) -> &mut Self {
        let ns = self.namespace.clone();
        self.class_in(&ns, local_name, label, comment)
    }

    pub fn class_in(&mut self, namespace: &str, local_name: &str, label: &str, comment: &str) -> &mut Self {
        self.classes.push(ClassDecl {
            namespace: namespace.to_owned(),
            local_name: local_name.to_owned(),
            label: label.to_owned(),
            comment: comment.to_owned(),
        });
        self
    }

    pub fn property(&mut self, local_name: &str, domain: TermRef, range: TermRef, label: &str) -> &mut Self {
        let ns = self.namespace.clone();
        self.property_in(&ns, local_name, domain, range, label)
    }

    pub fn property_in(
        &mut self,
        namespace: &str,
        local_name: &str,
        domain: TermRef,
        range: TermRef,
        label: &str,
    ) -> &mut Self {
        self.properties.push(PropertyDecl {
            namespace: namespace.to_owned(),
            local_name: local_name.to_owned(),
            domain,
            range,
            label: label.to_owned(),
        });
        self
    }

    pub fn individual(&mut self, local_name: &str, class: TermRef, label: &str) -> &mut Self {
        self.individuals.push(IndividualDecl {
            namespace: self.namespace.clone(),
            local_name: local_name.to_owned(),
            class,
            label: label.to_owned(),
        });
        self
    }

    pub fn rule(&mut self, rule: ShapeRule) -> &mut Self {
        self.rules.push(rule);
        self
    }

    pub fn class_iri(&self, local_name: &str) -> Option<Iri> {
        self.classes.iter().find(|c| c.local_name == local_name).map(ClassDecl::iri)
    }

    fn inconsistent(&self, message: String) -> VocabError {
        VocabError::InconsistentVocabulary {
            vocabulary: self.name.clone(),
            message,
        }
    }

    fn resolve(&self, r: &TermRef, owner: &str) -> Result<Iri, VocabError> {
        match r {
            TermRef::Local(name) => self
                .class_iri(name)
                .ok_or_else(|| self.inconsistent(format!("{owner} refers to undeclared class {name}"))),
            TermRef::Datatype(i) | TermRef::External(i) => Ok(i.clone()),
        }
    }

    /// Checks local-name uniqueness, reference resolution and rule sanity.
    pub fn validate(&self) -> Result<(), VocabError> {
        let mut seen = BTreeSet::new();
        let names = self
            .classes
            .iter()
            .map(|c| (&c.namespace, &c.local_name))
            .chain(self.properties.iter().map(|p| (&p.namespace, &p.local_name)))
            .chain(self.individuals.iter().map(|i| (&i.namespace, &i.local_name)));
        for (ns, name) in names {
            if !crate::rdf::is_absolute_iri(ns) {
                return Err(self.inconsistent(format!("invalid namespace {ns:?}")));
            }
            if !crate::rdf::is_plain_local_name(name) {
                return Err(self.inconsistent(format!("invalid local name {name:?}")));
            }
            if !seen.insert((ns, name)) {
                return Err(self.inconsistent(format!("duplicate local name {name}")));
            }
        }
        for p in &self.properties {
            self.resolve(&p.domain, &p.local_name)?;
            self.resolve(&p.range, &p.local_name)?;
            if matches!(p.domain, TermRef::Datatype(_)) {
                return Err(self.inconsistent(format!("{} has a datatype as domain", p.local_name)));
            }
        }
        for i in &self.individuals {
            self.resolve(&i.class, &i.local_name)?;
        }
        let mut ids = BTreeSet::new();
        for r in &self.rules {
            if r.message.is_empty() {
                return Err(self.inconsistent(format!("rule {} has an empty message", r.id)));
            }
            if !ids.insert(&r.id) {
                return Err(self.inconsistent(format!("duplicate rule id {}", r.id)));
            }
        }
        Ok(())
    }
}

/// Shape rules of all four vocabularies.
pub fn all_rules() -> Vec<ShapeRule> {
    all_vocabularies().into_iter().flat_map(|v| v.rules).collect()
}

/// Declaration graph: two triples per class and individual, four per property.
pub fn emit_vocabulary(v: &Vocabulary) -> Result<Graph, VocabError> {
    v.validate()?;
    let mut g = Graph::with_standard_prefixes();
    let rdf_type = Iri::from_static(rdf::TYPE);
    let label = Iri::from_static(rdfs::LABEL);
    let lit = |s: &str| Term::Literal(Literal::string(s));
    for c in &v.classes {
        g.add(c.iri(), &rdf_type, Iri::from_static(owl::CLASS));
        g.add(c.iri(), &label, lit(&c.label));
    }
    for p in &v.properties {
        let kind = if p.is_datatype_property() {
            owl::DATATYPE_PROPERTY
        } else {
            owl::OBJECT_PROPERTY
        };
        g.add(p.iri(), &rdf_type, Iri::from_static(kind));
        g.add(p.iri(), &Iri::from_static(rdfs::DOMAIN), v.resolve(&p.domain, &p.local_name)?);
        g.add(p.iri(), &Iri::from_static(rdfs::RANGE), v.resolve(&p.range, &p.local_name)?);
        g.add(p.iri(), &label, lit(&p.label));
    }
    for i in &v.individuals {
        g.add(i.iri(), &rdf_type, v.resolve(&i.class, &i.local_name)?);
        g.add(i.iri(), &label, lit(&i.label));
    }
    Ok(g)
}

#[cfg(test)]
mod tests;
