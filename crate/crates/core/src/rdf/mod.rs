//! RDF terms, triples and set-semantics graphs.

mod base;
mod iso;
mod term;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use base::BaseIri;
pub use iso::{isomorphic, MAX_BLANK_NODES};
pub use term::{format_decimal, is_absolute_iri, is_valid_blank_label, Iri, Literal, Term};
pub(crate) use term::escape_string;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RdfError {
    #[error("invalid IRI {0:?}")]
    InvalidIri(String),
    #[error("invalid blank node label {0:?}")]
    InvalidBlankLabel(String),
    #[error("invalid language tag {0:?}")]
    InvalidLanguageTag(String),
    #[error("literal cannot be used as a triple subject")]
    LiteralSubject,
    #[error("unknown prefix {0:?}")]
    UnknownPrefix(String),
    #[error("invalid prefix label {0:?}")]
    InvalidPrefix(String),
    #[error("graph has {count} blank nodes, above the isomorphism bound of {bound}")]
    TooManyBlankNodes { count: usize, bound: usize },
}

pub fn make_iri(text: &str) -> Result<Term, RdfError> {
    Term::iri(text)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Iri, object: Term) -> Result<Self, RdfError> {
        if matches!(subject, Term::Literal(_)) {
            return Err(RdfError::LiteralSubject);
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn into_parts(self) -> (Term, Iri, Term) {
        (self.subject, self.predicate, self.object)
    }
}

impl std::fmt::Display for Triple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// A set of triples plus a prefix map.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    prefixes: BTreeMap<String, String>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_standard_prefixes() -> Self {
        let mut g = Graph::new();
        for (label, ns) in crate::ns::standard_prefixes() {
            g.prefixes.insert(label.to_owned(), ns.to_owned());
        }
        g
    }

    /// Inserts a triple, returning the size delta (0 or 1).
    pub fn insert(&mut self, triple: Triple) -> usize {
        usize::from(self.triples.insert(triple))
    }

    /// Convenience insert for builders; `subject` must not be a literal.
    pub fn add(&mut self, subject: impl Into<Term>, predicate: &Iri, object: impl Into<Term>) -> usize {
        let subject = subject.into();
        assert!(!matches!(subject, Term::Literal(_)), "literal subject");
        self.insert(Triple {
            subject,
            predicate: predicate.clone(),
            object: object.into(),
        })
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        self.triples.remove(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn triples(&self) -> &BTreeSet<Triple> {
        &self.triples
    }

    /// Adds every triple and prefix of `other`; existing prefix labels win.
    pub fn extend_from(&mut self, other: &Graph) -> usize {
        for (label, ns) in &other.prefixes {
            self.prefixes.entry(label.clone()).or_insert_with(|| ns.clone());
        }
        other.triples.iter().map(|t| self.insert(t.clone())).sum()
    }

    pub fn retain(&mut self, f: impl FnMut(&Triple) -> bool) {
        self.triples.retain(f);
    }

    pub fn blank_nodes(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for t in &self.triples {
            for term in [&t.subject, &t.object] {
                if let Term::Blank(b) = term {
                    out.insert(b.as_str());
                }
            }
        }
        out
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    pub fn set_prefix(&mut self, label: &str, namespace: &str) -> Result<(), RdfError> {
        if !is_valid_prefix_label(label) {
            return Err(RdfError::InvalidPrefix(label.to_owned()));
        }
        if !is_absolute_iri(namespace) {
            return Err(RdfError::InvalidIri(namespace.to_owned()));
        }
        self.prefixes.insert(label.to_owned(), namespace.to_owned());
        Ok(())
    }

    pub fn remove_prefix(&mut self, label: &str) -> Option<String> {
        self.prefixes.remove(label)
    }

    /// Expands `label:local` against the registered prefixes.
    pub fn expand(&self, prefixed_name: &str) -> Result<String, RdfError> {
        expand_with(&self.prefixes, prefixed_name)
    }

    /// Inverse of [`Graph::expand`]: the longest matching namespace whose
    /// remainder is a plain local name.
    pub fn shrink(&self, iri: &str) -> Option<String> {
        shrink_with(&self.prefixes, iri)
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph {
            triples: iter.into_iter().collect(),
            prefixes: BTreeMap::new(),
        }
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

pub fn is_valid_prefix_label(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_alphabetic() => {
            chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')) && !label.ends_with('.')
        }
        Some(_) => false,
    }
}

/// A local name the serializer may emit without escapes.
pub fn is_plain_local_name(local: &str) -> bool {
    if local.is_empty() {
        return true;
    }
    let first = local.chars().next().unwrap();
    let last = local.chars().last().unwrap();
    (first.is_ascii_alphanumeric() || first == '_')
        && last != '.'
        && local.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

pub fn expand_with(prefixes: &BTreeMap<String, String>, prefixed_name: &str) -> Result<String, RdfError> {
    let (label, local) = prefixed_name
        .split_once(':')
        .ok_or_else(|| RdfError::UnknownPrefix(prefixed_name.to_owned()))?;
    let ns = prefixes
        .get(label)
        .ok_or_else(|| RdfError::UnknownPrefix(label.to_owned()))?;
    Ok(format!("{ns}{local}"))
}

pub fn shrink_with(prefixes: &BTreeMap<String, String>, iri: &str) -> Option<String> {
    prefixes
        .iter()
        .filter(|(_, ns)| iri.starts_with(ns.as_str()) && is_plain_local_name(&iri[ns.len()..]))
        // longest namespace first, then smallest label
        .max_by(|(la, na), (lb, nb)| na.len().cmp(&nb.len()).then(lb.cmp(la)))
        .map(|(label, ns)| format!("{label}:{}", &iri[ns.len()..]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(Term::iri(s).unwrap(), iri(p), Term::iri(o).unwrap()).unwrap()
    }

    #[test]
    fn make_iri_examples() {
        assert!(matches!(make_iri("http://example.org/s"), Ok(Term::Iri(_))));
        assert!(matches!(make_iri("not an iri"), Err(RdfError::InvalidIri(_))));
        assert!(make_iri("https://w3.org/ns/prov#Entity").is_ok());
    }

    #[test]
    fn insert_has_set_semantics() {
        let mut g = Graph::new();
        let a = t("http://example.org/s", "http://example.org/p", "http://example.org/o");
        assert_eq!(g.insert(a.clone()), 1);
        assert_eq!(g.len(), 1);
        assert_eq!(g.insert(a), 0);
        assert_eq!(g.len(), 1);
        g.insert(t("http://example.org/s", "http://example.org/p", "http://example.org/o2"));
        g.insert(t("http://example.org/s", "http://example.org/q", "http://example.org/o"));
        assert_eq!(g.len(), 3);
    }

    #[test]
    fn literal_subject_rejected() {
        let err = Triple::new(Term::string("x"), iri("http://example.org/p"), Term::string("y"));
        assert_eq!(err, Err(RdfError::LiteralSubject));
    }

    #[test]
    fn expand_examples() {
        let mut g = Graph::new();
        g.set_prefix("ex", "http://example.org/").unwrap();
        g.set_prefix("prov", "http://www.w3.org/ns/prov#").unwrap();
        assert_eq!(g.expand("ex:s").unwrap(), "http://example.org/s");
        assert_eq!(g.expand("prov:Entity").unwrap(), "http://www.w3.org/ns/prov#Entity");
        assert_eq!(g.expand("zz:x"), Err(RdfError::UnknownPrefix("zz".into())));
    }

    #[test]
    fn shrink_prefers_longest_namespace() {
        let mut g = Graph::new();
        g.set_prefix("ex", "http://example.org/").unwrap();
        g.set_prefix("exv", "http://example.org/vocab#").unwrap();
        assert_eq!(g.shrink("http://example.org/vocab#C").as_deref(), Some("exv:C"));
        assert_eq!(g.shrink("http://example.org/a/b"), None);
        assert_eq!(g.shrink("http://other.org/a"), None);
    }

    #[test]
    fn prefix_labels_validated() {
        let mut g = Graph::new();
        assert!(g.set_prefix("", "http://example.org/").is_ok());
        assert!(g.set_prefix("1x", "http://example.org/").is_err());
        assert!(g.set_prefix("ok", "nope").is_err());
    }

    proptest! {
        #[test]
        fn insertion_idempotent(s in 0u8..5, p in 0u8..3, o in 0u8..5, seed in proptest::collection::vec((0u8..5, 0u8..3, 0u8..5), 0..10)) {
            let mk = |s: u8, p: u8, o: u8| t(&format!("http://e.org/s{s}"), &format!("http://e.org/p{p}"), &format!("http://e.org/o{o}"));
            let mut g: Graph = seed.iter().map(|&(s, p, o)| mk(s, p, o)).collect();
            g.insert(mk(s, p, o));
            let once = g.len();
            g.insert(mk(s, p, o));
            prop_assert_eq!(g.len(), once);
        }

        #[test]
        fn shrink_then_expand_is_identity(local in "[A-Za-z_][A-Za-z0-9_-]{0,12}", which in 0usize..3) {
            let mut g = Graph::new();
            g.set_prefix("ex", "http://example.org/").unwrap();
            g.set_prefix("v", "http://example.org/v#").unwrap();
            g.set_prefix("prov", "http://www.w3.org/ns/prov#").unwrap();
            let ns = ["http://example.org/", "http://example.org/v#", "http://www.w3.org/ns/prov#"][which];
            let full = format!("{ns}{local}");
            let short = g.shrink(&full).unwrap();
            prop_assert_eq!(g.expand(&short).unwrap(), full);
        }
    }
}
