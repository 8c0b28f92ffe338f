//! In-memory triple store with three permutation indexes and a
//! basic-graph-pattern SELECT engine.

mod eval;
mod query;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::ns::rdf;
use crate::rdf::{Graph, Iri, Term, Triple};

pub use eval::{select, QueryResult};
pub use query::{
    parse_query, Comparator, Direction, Filter, FilterOperand, OrderBy, PatternTerm, Projection, QueryError,
    SelectQuery, TriplePattern,
};

pub type Binding = BTreeMap<String, Term>;

type Key = (u32, u32, u32);

/// Which permutation index to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexOrder {
    Spo,
    Pos,
    Osp,
}

#[derive(Debug, Clone, Default)]
pub struct Store {
    terms: Vec<Term>,
    ids: HashMap<Term, u32>,
    spo: BTreeSet<Key>,
    pos: BTreeSet<Key>,
    osp: BTreeSet<Key>,
    prefixes: BTreeMap<String, String>,
}

impl Store {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_graph(graph: &Graph) -> Self {
        let mut s = Store::new();
        s.load(graph);
        s
    }

    /// Adds every triple of `graph`; returns how many were new.
    pub fn load(&mut self, graph: &Graph) -> usize {
        for (label, ns) in graph.prefixes() {
            self.prefixes.entry(label.clone()).or_insert_with(|| ns.clone());
        }
        graph.iter().filter(|t| self.insert(t)).count()
    }

    pub fn insert(&mut self, triple: &Triple) -> bool {
        let s = self.intern(triple.subject());
        let p = self.intern(&Term::Iri(triple.predicate().clone()));
        let o = self.intern(triple.object());
        if !self.spo.insert((s, p, o)) {
            return false;
        }
        self.pos.insert((p, o, s));
        self.osp.insert((o, s, p));
        true
    }

    fn intern(&mut self, term: &Term) -> u32 {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = u32::try_from(self.terms.len()).expect("term table overflow");
        self.terms.push(term.clone());
        self.ids.insert(term.clone(), id);
        id
    }

    pub(crate) fn id_of(&self, term: &Term) -> Option<u32> {
        self.ids.get(term).copied()
    }

    pub(crate) fn term(&self, id: u32) -> &Term {
        &self.terms[id as usize]
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    pub fn set_prefix(&mut self, label: &str, namespace: &str) {
        self.prefixes.insert(label.to_owned(), namespace.to_owned());
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        let key = (
            self.id_of(triple.subject()),
            self.id_of(&Term::Iri(triple.predicate().clone())),
            self.id_of(triple.object()),
        );
        match key {
            (Some(s), Some(p), Some(o)) => self.spo.contains(&(s, p, o)),
            _ => false,
        }
    }

    fn to_triple(&self, (s, p, o): Key) -> Triple {
        let Term::Iri(pred) = self.term(p).clone() else {
            unreachable!("predicates are interned from IRIs")
        };
        Triple::new(self.term(s).clone(), pred, self.term(o).clone()).expect("stored triples are well-formed")
    }

    /// Enumerates all triples through the chosen index.
    pub fn iter_index(&self, order: IndexOrder) -> Vec<Triple> {
        match order {
            IndexOrder::Spo => self.spo.iter().map(|&k| self.to_triple(k)).collect(),
            IndexOrder::Pos => self.pos.iter().map(|&(p, o, s)| self.to_triple((s, p, o))).collect(),
            IndexOrder::Osp => self.osp.iter().map(|&(o, s, p)| self.to_triple((s, p, o))).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().map(|&k| self.to_triple(k))
    }

    pub fn to_graph(&self) -> Graph {
        let mut g: Graph = self.iter().collect();
        for (l, n) in &self.prefixes {
            let _ = g.set_prefix(l, n);
        }
        g
    }

    /// All (s, p, o) id keys matching the bound positions, in SPO order.
    pub(crate) fn scan(&self, s: Option<u32>, p: Option<u32>, o: Option<u32>) -> Vec<Key> {
        const MAX: u32 = u32::MAX;
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                if self.spo.contains(&(s, p, o)) {
                    vec![(s, p, o)]
                } else {
                    vec![]
                }
            }
            (Some(s), Some(p), None) => self.spo.range((s, p, 0)..=(s, p, MAX)).copied().collect(),
            (Some(s), None, None) => self.spo.range((s, 0, 0)..=(s, MAX, MAX)).copied().collect(),
            (None, Some(p), Some(o)) => self.pos.range((p, o, 0)..=(p, o, MAX)).map(|&(p, o, s)| (s, p, o)).collect(),
            (None, Some(p), None) => self.pos.range((p, 0, 0)..=(p, MAX, MAX)).map(|&(p, o, s)| (s, p, o)).collect(),
            (Some(s), None, Some(o)) => self.osp.range((o, s, 0)..=(o, s, MAX)).map(|&(o, s, p)| (s, p, o)).collect(),
            (None, None, Some(o)) => self.osp.range((o, 0, 0)..=(o, MAX, MAX)).map(|&(o, s, p)| (s, p, o)).collect(),
            (None, None, None) => self.spo.iter().copied().collect(),
        }
    }

    /// Number of triples matching the bound positions, without materialising them.
    pub(crate) fn cardinality(&self, s: Option<u32>, p: Option<u32>, o: Option<u32>) -> usize {
        const MAX: u32 = u32::MAX;
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => usize::from(self.spo.contains(&(s, p, o))),
            (Some(s), Some(p), None) => self.spo.range((s, p, 0)..=(s, p, MAX)).count(),
            (Some(s), None, None) => self.spo.range((s, 0, 0)..=(s, MAX, MAX)).count(),
            (None, Some(p), Some(o)) => self.pos.range((p, o, 0)..=(p, o, MAX)).count(),
            (None, Some(p), None) => self.pos.range((p, 0, 0)..=(p, MAX, MAX)).count(),
            (Some(s), None, Some(o)) => self.osp.range((o, s, 0)..=(o, s, MAX)).count(),
            (None, None, Some(o)) => self.osp.range((o, 0, 0)..=(o, MAX, MAX)).count(),
            (None, None, None) => self.spo.len(),
        }
    }

    /// One binding per triple matching `pattern`.
    pub fn match_pattern(&self, pattern: &TriplePattern) -> Vec<Binding> {
        let resolve = |pt: &PatternTerm| match pt {
            PatternTerm::Term(t) => Some(self.id_of(t)),
            PatternTerm::Var(_) => None,
        };
        let (s, p, o) = (resolve(&pattern.subject), resolve(&pattern.predicate), resolve(&pattern.object));
        // a ground term that was never interned matches nothing
        if [s, p, o].iter().any(|x| matches!(x, Some(None))) {
            return Vec::new();
        }
        let keys = self.scan(s.flatten(), p.flatten(), o.flatten());
        let mut out = Vec::with_capacity(keys.len());
        'keys: for (ks, kp, ko) in keys {
            let mut b = Binding::new();
            for (pt, id) in [(&pattern.subject, ks), (&pattern.predicate, kp), (&pattern.object, ko)] {
                if let PatternTerm::Var(v) = pt {
                    let term = self.term(id);
                    match b.get(v) {
                        Some(existing) if existing != term => continue 'keys,
                        Some(_) => {}
                        None => {
                            b.insert(v.clone(), term.clone());
                        }
                    }
                }
            }
            out.push(b);
        }
        out
    }

    // ---- convenience accessors used by validation and lineage code ----

    pub fn objects(&self, subject: &Term, predicate: &Iri) -> Vec<Term> {
        let (Some(s), Some(p)) = (self.id_of(subject), self.id_of(&Term::Iri(predicate.clone()))) else {
            return Vec::new();
        };
        self.scan(Some(s), Some(p), None)
            .into_iter()
            .map(|(_, _, o)| self.term(o).clone())
            .collect()
    }

    pub fn subjects(&self, predicate: &Iri, object: &Term) -> Vec<Term> {
        let (Some(p), Some(o)) = (self.id_of(&Term::Iri(predicate.clone())), self.id_of(object)) else {
            return Vec::new();
        };
        self.scan(None, Some(p), Some(o))
            .into_iter()
            .map(|(s, _, _)| self.term(s).clone())
            .collect()
    }

    /// Subjects typed `class` via `rdf:type`, sorted.
    pub fn instances_of(&self, class: &Iri) -> Vec<Term> {
        let mut v = self.subjects(&Iri::from_static(rdf::TYPE), &Term::Iri(class.clone()));
        v.sort();
        v
    }

    pub fn has_type(&self, subject: &Term, class: &Iri) -> bool {
        let t = Triple::new(subject.clone(), Iri::from_static(rdf::TYPE), Term::Iri(class.clone()));
        t.map(|t| self.contains(&t)).unwrap_or(false)
    }
}
