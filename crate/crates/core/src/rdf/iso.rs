use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Graph, RdfError, Term, Triple};

/// Hard bound on blank nodes per graph for the exact isomorphism search.
pub const MAX_BLANK_NODES: usize = 8;

/// True iff some bijection between blank nodes makes the triple sets equal.
///
/// Exact backtracking search; graphs with more than [`MAX_BLANK_NODES`]
/// blank nodes are rejected.
pub fn isomorphic(a: &Graph, b: &Graph) -> Result<bool, RdfError> {
    let blanks_a = a.blank_nodes();
    let blanks_b = b.blank_nodes();
    for count in [blanks_a.len(), blanks_b.len()] {
        if count > MAX_BLANK_NODES {
            return Err(RdfError::TooManyBlankNodes {
                count,
                bound: MAX_BLANK_NODES,
            });
        }
    }
    if a.len() != b.len() || blanks_a.len() != blanks_b.len() {
        return Ok(false);
    }

    let (ground_a, open_a): (Vec<&Triple>, Vec<&Triple>) = a.iter().partition(|t| is_ground(t));
    let ground_b = b.iter().filter(|t| is_ground(t)).count();
    if ground_a.len() != ground_b || !ground_a.iter().all(|t| b.contains(t)) {
        return Ok(false);
    }
    if open_a.is_empty() {
        return Ok(true);
    }

    let sig_a = signatures(a);
    let sig_b = signatures(b);

    // Most constrained nodes first.
    let mut order: Vec<&str> = blanks_a.iter().copied().collect();
    order.sort_by_key(|n| std::cmp::Reverse(sig_a[n].len()));

    let candidates: Vec<Vec<&str>> = order
        .iter()
        .map(|n| {
            blanks_b
                .iter()
                .copied()
                .filter(|m| sig_b[m] == sig_a[n])
                .collect()
        })
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return Ok(false);
    }

    // Triples become checkable once their last blank node (in `order`) is assigned.
    let position: HashMap<&str, usize> = order.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let mut checks: Vec<Vec<&Triple>> = vec![Vec::new(); order.len()];
    for t in &open_a {
        let last = blank_labels(t).map(|l| position[l]).max().unwrap();
        checks[last].push(t);
    }

    let mut search = Search {
        order: &order,
        candidates: &candidates,
        checks: &checks,
        target: b,
        mapping: HashMap::new(),
        used: BTreeSet::new(),
    };
    Ok(search.assign(0))
}

struct Search<'a> {
    order: &'a [&'a str],
    candidates: &'a [Vec<&'a str>],
    checks: &'a [Vec<&'a Triple>],
    target: &'a Graph,
    mapping: HashMap<&'a str, &'a str>,
    used: BTreeSet<&'a str>,
}

impl<'a> Search<'a> {
    fn assign(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let node = self.order[depth];
        for &cand in &self.candidates[depth] {
            if self.used.contains(cand) {
                continue;
            }
            self.mapping.insert(node, cand);
            self.used.insert(cand);
            let consistent = self.checks[depth]
                .iter()
                .all(|t| self.target.contains(&self.map_triple(t)));
            if consistent && self.assign(depth + 1) {
                return true;
            }
            self.used.remove(cand);
            self.mapping.remove(node);
        }
        false
    }

    fn map_triple(&self, t: &Triple) -> Triple {
        let map = |term: &Term| match term {
            Term::Blank(l) => Term::Blank(self.mapping[l.as_str()].to_owned()),
            other => other.clone(),
        };
        Triple {
            subject: map(&t.subject),
            predicate: t.predicate.clone(),
            object: map(&t.object),
        }
    }
}

fn is_ground(t: &Triple) -> bool {
    !t.subject.is_blank() && !t.object.is_blank()
}

fn blank_labels(t: &Triple) -> impl Iterator<Item = &str> {
    [&t.subject, &t.object].into_iter().filter_map(|term| match term {
        Term::Blank(l) => Some(l.as_str()),
        _ => None,
    })
}

type Signature = Vec<(u8, String, Option<String>)>;

/// Per blank node: sorted multiset of (role, predicate, neighbour-if-ground).
fn signatures(g: &Graph) -> BTreeMap<&str, Signature> {
    let mut out: BTreeMap<&str, Signature> = BTreeMap::new();
    for t in g.iter() {
        let p = t.predicate.as_str().to_owned();
        let ground = |term: &Term| (!term.is_blank()).then(|| term.to_string());
        if let Term::Blank(s) = &t.subject {
            let self_loop = t.subject == t.object;
            out.entry(s.as_str())
                .or_default()
                .push((if self_loop { 2 } else { 0 }, p.clone(), ground(&t.object)));
        }
        if let Term::Blank(o) = &t.object {
            if t.subject != t.object {
                out.entry(o.as_str()).or_default().push((1, p, ground(&t.subject)));
            }
        }
    }
    for sig in out.values_mut() {
        sig.sort();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Iri;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn node(spec: &str) -> Term {
        match spec.strip_prefix("_:") {
            Some(l) => Term::Blank(l.to_owned()),
            None => Term::iri(&format!("http://example.org/{spec}")).unwrap(),
        }
    }

    fn graph(triples: &[(&str, &str, &str)]) -> Graph {
        triples
            .iter()
            .map(|(s, p, o)| {
                Triple::new(node(s), Iri::new(format!("http://example.org/{p}")).unwrap(), node(o)).unwrap()
            })
            .collect()
    }

    /// Oracle: try every bijection between the blank node sets.
    fn brute_force(a: &Graph, b: &Graph) -> bool {
        let ba: Vec<String> = a.blank_nodes().into_iter().map(str::to_owned).collect();
        let bb: Vec<String> = b.blank_nodes().into_iter().map(str::to_owned).collect();
        if ba.len() != bb.len() || a.len() != b.len() {
            return false;
        }
        bb.iter().permutations(bb.len()).any(|perm| {
            let map: HashMap<&str, &str> = ba.iter().map(String::as_str).zip(perm.iter().map(|s| s.as_str())).collect();
            let relabel = |t: &Term| match t {
                Term::Blank(l) => Term::Blank(map[l.as_str()].to_owned()),
                o => o.clone(),
            };
            let mapped: Graph = a
                .iter()
                .map(|t| Triple::new(relabel(t.subject()), t.predicate().clone(), relabel(t.object())).unwrap())
                .collect();
            mapped.triples() == b.triples()
        })
    }

    #[test]
    fn ground_graphs_compare_by_set_equality() {
        let a = graph(&[("s", "p", "o"), ("s", "q", "o")]);
        let b = graph(&[("s", "q", "o"), ("s", "p", "o")]);
        assert!(isomorphic(&a, &b).unwrap());
        let c = graph(&[("s", "q", "o"), ("s", "p", "o2")]);
        assert!(!isomorphic(&a, &c).unwrap());
    }

    #[test]
    fn relabeling_is_isomorphic() {
        let a = graph(&[("_:a", "p", "o")]);
        let b = graph(&[("_:b", "p", "o")]);
        assert!(isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn self_loop_differs_from_two_nodes() {
        let a = graph(&[("_:a", "p", "_:a")]);
        let b = graph(&[("_:a", "p", "_:b")]);
        assert!(!brute_force(&a, &b));
        assert!(!isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn bound_enforced() {
        let many: Vec<(String, String)> = (0..9).map(|i| (format!("_:b{i}"), format!("o{i}"))).collect();
        let refs: Vec<(&str, &str, &str)> = many.iter().map(|(s, o)| (s.as_str(), "p", o.as_str())).collect();
        let g = graph(&refs);
        assert_eq!(
            isomorphic(&g, &g),
            Err(RdfError::TooManyBlankNodes { count: 9, bound: 8 })
        );
    }

    #[test]
    fn symmetric_structures_need_backtracking() {
        // two 2-cycles vs one 4-cycle: identical degree signatures
        let a = graph(&[("_:a", "p", "_:b"), ("_:b", "p", "_:a"), ("_:c", "p", "_:d"), ("_:d", "p", "_:c")]);
        let b = graph(&[("_:a", "p", "_:b"), ("_:b", "p", "_:c"), ("_:c", "p", "_:d"), ("_:d", "p", "_:a")]);
        assert!(!brute_force(&a, &b));
        assert!(!isomorphic(&a, &b).unwrap());
        let c = graph(&[("_:w", "p", "_:x"), ("_:x", "p", "_:y"), ("_:y", "p", "_:z"), ("_:z", "p", "_:w")]);
        assert!(isomorphic(&b, &c).unwrap());
    }

    fn small_graph() -> impl Strategy<Value = Graph> {
        let term = prop_oneof![
            (0u8..3).prop_map(|i| format!("_:b{i}")),
            (0u8..3).prop_map(|i| format!("n{i}")),
        ];
        proptest::collection::vec((term.clone(), 0u8..2, term), 0..6).prop_map(|ts| {
            let owned: Vec<(String, String, String)> = ts.into_iter().map(|(s, p, o)| (s, format!("p{p}"), o)).collect();
            let refs: Vec<(&str, &str, &str)> = owned.iter().map(|(s, p, o)| (s.as_str(), p.as_str(), o.as_str())).collect();
            graph(&refs)
        })
    }

    fn relabeled(g: &Graph, salt: u8) -> Graph {
        g.iter()
            .map(|t| {
                let r = |term: &Term| match term {
                    Term::Blank(l) => Term::Blank(format!("x{salt}_{l}")),
                    o => o.clone(),
                };
                Triple::new(r(t.subject()), t.predicate().clone(), r(t.object())).unwrap()
            })
            .collect()
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(a in small_graph(), b in small_graph()) {
            prop_assert_eq!(isomorphic(&a, &b).unwrap(), brute_force(&a, &b));
        }

        #[test]
        fn equivalence_relation(a in small_graph(), b in small_graph(), c in small_graph()) {
            prop_assert!(isomorphic(&a, &a).unwrap());
            prop_assert!(isomorphic(&a, &relabeled(&a, 1)).unwrap());
            prop_assert_eq!(isomorphic(&a, &b).unwrap(), isomorphic(&b, &a).unwrap());
            if isomorphic(&a, &b).unwrap() && isomorphic(&b, &c).unwrap() {
                prop_assert!(isomorphic(&a, &c).unwrap());
            }
            // transitivity through a relabeled copy
            let a2 = relabeled(&a, 2);
            prop_assert_eq!(isomorphic(&a2, &b).unwrap(), isomorphic(&a, &b).unwrap());
        }
    }
}
