use std::collections::{BTreeSet, VecDeque};

use crate::ns::prov;
use crate::rdf::{Iri, Term};
use crate::store::{PatternTerm, Store, TriplePattern};

fn parents(store: &Store, entity: &Term) -> Vec<Term> {
    let mut out = store.objects(entity, &Iri::from_static(prov::WAS_DERIVED_FROM));
    for activity in store.objects(entity, &Iri::from_static(prov::WAS_GENERATED_BY)) {
        out.extend(store.objects(&activity, &Iri::from_static(prov::USED)));
    }
    out
}

/// Entities reachable from `entity` through `wasDerivedFrom` and
/// `wasGeneratedBy` followed by `used`. The start entity is excluded even
/// when it lies on a cycle.
pub fn upstream(store: &Store, entity: &Term) -> BTreeSet<Term> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([entity.clone()]);
    while let Some(e) = queue.pop_front() {
        for p in parents(store, &e) {
            if seen.insert(p.clone()) {
                queue.push_back(p);
            }
        }
    }
    seen.remove(entity);
    seen
}

/// Entities that are their own ancestors.
pub fn derivation_cycles(store: &Store) -> Vec<Term> {
    let mut candidates: BTreeSet<Term> = store.instances_of(&Iri::from_static(prov::ENTITY)).into_iter().collect();
    for pred in [prov::WAS_DERIVED_FROM, prov::WAS_GENERATED_BY] {
        let pattern = TriplePattern::new(
            PatternTerm::var("s"),
            PatternTerm::Term(Term::Iri(Iri::from_static(pred))),
            PatternTerm::var("o"),
        );
        candidates.extend(store.match_pattern(&pattern).into_iter().filter_map(|b| b.get("s").cloned()));
    }
    candidates
        .into_iter()
        .filter(|e| {
            let mut seen = BTreeSet::new();
            let mut queue = VecDeque::from([e.clone()]);
            while let Some(x) = queue.pop_front() {
                for p in parents(store, &x) {
                    if &p == e {
                        return true;
                    }
                    if seen.insert(p.clone()) {
                        queue.push_back(p);
                    }
                }
            }
            false
        })
        .collect()
}
