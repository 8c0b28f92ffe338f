use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};

use regex::Regex;
use serde::Serialize;

use super::query::{Comparator, Direction, Filter, FilterOperand, PatternTerm, SelectQuery, TriplePattern};
use super::{Binding, Store};
use crate::ns::xsd;
use crate::rdf::Term;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryResult {
    pub variables: Vec<String>,
    pub rows: Vec<Vec<Term>>,
}

impl QueryResult {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, variable: &str) -> Option<Vec<&Term>> {
        let i = self.variables.iter().position(|v| v == variable)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    /// Tab-separated table with a `?var` header row.
    pub fn to_tsv(&self) -> String {
        let mut out = self.variables.iter().map(|v| format!("?{v}")).collect::<Vec<_>>().join("\t");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Term::to_string).collect::<Vec<_>>().join("\t"));
            out.push('\n');
        }
        out
    }
}

const NUMERIC_TYPES: &[&str] = &[
    xsd::INTEGER,
    xsd::DECIMAL,
    xsd::DOUBLE,
    "http://www.w3.org/2001/XMLSchema#float",
    "http://www.w3.org/2001/XMLSchema#int",
    "http://www.w3.org/2001/XMLSchema#long",
    "http://www.w3.org/2001/XMLSchema#short",
    "http://www.w3.org/2001/XMLSchema#nonNegativeInteger",
    "http://www.w3.org/2001/XMLSchema#positiveInteger",
];

fn numeric_value(t: &Term) -> Option<f64> {
    let l = t.as_literal()?;
    if NUMERIC_TYPES.contains(&l.datatype().as_str()) {
        l.as_f64()
    } else {
        None
    }
}

fn ordering_holds(c: Comparator, ord: Ordering) -> bool {
    match c {
        Comparator::Eq => ord == Ordering::Equal,
        Comparator::Ne => ord != Ordering::Equal,
        Comparator::Lt => ord == Ordering::Less,
        Comparator::Le => ord != Ordering::Greater,
        Comparator::Gt => ord == Ordering::Greater,
        Comparator::Ge => ord != Ordering::Less,
        Comparator::Regex => false,
    }
}

struct CompiledFilter<'a> {
    filter: &'a Filter,
    regex: Option<Regex>,
}

impl CompiledFilter<'_> {
    fn accepts(&self, value: &Term) -> bool {
        match (&self.filter.operand, &self.regex) {
            (FilterOperand::Pattern(_), Some(re)) => re.is_match(&value.value_text()),
            (FilterOperand::Pattern(_), None) => false,
            (FilterOperand::Term(operand), _) => compare(value, self.filter.comparator, operand),
        }
    }
}

/// Filter comparison: numeric when both sides are numeric literals, term
/// equality for `=`/`!=`, lexical order for literals sharing a datatype.
pub(crate) fn compare(value: &Term, comparator: Comparator, operand: &Term) -> bool {
    if let (Some(a), Some(b)) = (numeric_value(value), numeric_value(operand)) {
        return a.partial_cmp(&b).is_some_and(|o| ordering_holds(comparator, o));
    }
    match comparator {
        Comparator::Eq => value == operand,
        Comparator::Ne => value != operand,
        Comparator::Regex => false,
        _ => match (value.as_literal(), operand.as_literal()) {
            (Some(a), Some(b)) if a.datatype() == b.datatype() && a.language() == b.language() => {
                ordering_holds(comparator, a.lexical().cmp(b.lexical()))
            }
            _ => false,
        },
    }
}

fn order_terms(a: &Term, b: &Term) -> Ordering {
    match (a.as_literal().and_then(|l| l.as_f64()), b.as_literal().and_then(|l| l.as_f64())) {
        (Some(x), Some(y)) => x.partial_cmp(&y).unwrap_or(Ordering::Equal),
        _ => a.to_string().cmp(&b.to_string()),
    }
}

fn row_key(vars: &[String], b: &Binding) -> String {
    vars.iter()
        .map(|v| b.get(v).map(Term::to_string).unwrap_or_default())
        .collect::<Vec<_>>()
        .join("\u{1f}")
}

/// Orders remaining patterns: most constrained first, then smallest index range.
fn next_pattern(store: &Store, remaining: &[&TriplePattern], bound: &BTreeSet<String>) -> usize {
    let score = |p: &TriplePattern| {
        let positions = [&p.subject, &p.predicate, &p.object];
        let constrained = positions
            .iter()
            .filter(|pt| match pt {
                PatternTerm::Term(_) => true,
                PatternTerm::Var(v) => bound.contains(v),
            })
            .count();
        let id = |pt: &PatternTerm| match pt {
            PatternTerm::Term(t) => store.id_of(t).map(Some),
            PatternTerm::Var(_) => Some(None),
        };
        let card = match (id(&p.subject), id(&p.predicate), id(&p.object)) {
            (Some(s), Some(pr), Some(o)) => store.cardinality(s, pr, o),
            _ => 0,
        };
        (std::cmp::Reverse(constrained), card)
    };
    let mut best = 0;
    for i in 1..remaining.len() {
        if score(remaining[i]) < score(remaining[best]) {
            best = i;
        }
    }
    best
}

fn substitute(p: &TriplePattern, b: &Binding) -> TriplePattern {
    let sub = |pt: &PatternTerm| match pt {
        PatternTerm::Var(v) => b.get(v).cloned().map(PatternTerm::Term).unwrap_or_else(|| pt.clone()),
        t => t.clone(),
    };
    TriplePattern {
        subject: sub(&p.subject),
        predicate: sub(&p.predicate),
        object: sub(&p.object),
    }
}

/// Evaluates an already validated query against `store`.
pub fn select(store: &Store, query: &SelectQuery) -> QueryResult {
    let compiled: Vec<CompiledFilter> = query
        .filters
        .iter()
        .map(|f| CompiledFilter {
            filter: f,
            regex: match &f.operand {
                FilterOperand::Pattern(p) => Regex::new(p).ok(),
                FilterOperand::Term(_) => None,
            },
        })
        .collect();
    let mut pending: Vec<&CompiledFilter> = compiled.iter().collect();
    let mut remaining: Vec<&TriplePattern> = query.patterns.iter().collect();
    let mut bound: BTreeSet<String> = BTreeSet::new();
    let mut rows: Vec<Binding> = vec![Binding::new()];

    while !remaining.is_empty() && !rows.is_empty() {
        let pattern = remaining.remove(next_pattern(store, &remaining, &bound));
        let mut next = Vec::new();
        for row in &rows {
            for m in store.match_pattern(&substitute(pattern, row)) {
                let mut extended = row.clone();
                extended.extend(m);
                next.push(extended);
            }
        }
        bound.extend(pattern.variables().map(str::to_owned));
        let (ready, later): (Vec<_>, Vec<_>) = pending.into_iter().partition(|f| bound.contains(&f.filter.variable));
        pending = later;
        next.retain(|row| ready.iter().all(|f| f.accepts(&row[&f.filter.variable])));
        rows = next;
    }
    if !remaining.is_empty() {
        rows.clear();
    }

    let all_vars = query.pattern_variables();
    let mut keyed: Vec<(String, Binding)> = rows.into_iter().map(|b| (row_key(&all_vars, &b), b)).collect();
    match &query.order_by {
        Some(o) => keyed.sort_by(|(ka, a), (kb, b)| {
            let primary = order_terms(&a[&o.variable], &b[&o.variable]);
            let primary = if o.direction == Direction::Descending {
                primary.reverse()
            } else {
                primary
            };
            primary.then_with(|| ka.cmp(kb))
        }),
        None => keyed.sort_by(|a, b| a.0.cmp(&b.0)),
    }

    let variables = query.projected_variables();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (_, b) in keyed {
        let row: Vec<Term> = variables.iter().map(|v| b[v].clone()).collect();
        if query.distinct && !seen.insert(row.clone()) {
            continue;
        }
        out.push(row);
        if query.limit.is_some_and(|l| out.len() >= l) {
            break;
        }
    }
    if query.limit == Some(0) {
        out.clear();
    }
    QueryResult { variables, rows: out }
}

impl Store {
    /// Parses and evaluates `text`. Prefixes declared on the store and the
    /// standard vocabulary prefixes are available without `PREFIX` lines.
    pub fn query(&self, text: &str) -> Result<QueryResult, super::QueryError> {
        let mut prefixes: BTreeMap<String, String> = crate::ns::standard_prefixes()
            .into_iter()
            .map(|(l, n)| (l.to_owned(), n.to_owned()))
            .collect();
        prefixes.extend(self.prefixes.iter().map(|(l, n)| (l.clone(), n.clone())));
        let q = super::parse_query(text, &prefixes)?;
        Ok(select(self, &q))
    }
}
