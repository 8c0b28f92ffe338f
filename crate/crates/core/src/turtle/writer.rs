use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::ns::{rdf, xsd};
use crate::rdf::{escape_string, shrink_with, Graph, Iri, Term};

/// Writes `graph` as Turtle.
///
/// Output is canonical for a given graph: prefixes sorted by label, one block
/// per subject, subjects/predicates/objects sorted by their rendered form.
/// IRIs outside a registered namespace are written in angle brackets.
pub fn serialize_turtle(graph: &Graph) -> String {
    let prefixes = graph.prefixes();
    let mut out = String::new();
    for (label, ns) in prefixes {
        let _ = writeln!(out, "@prefix {label}: <{ns}> .");
    }

    // subject -> predicate -> objects, keyed by rendered form
    let mut blocks: BTreeMap<String, BTreeMap<String, Vec<String>>> = BTreeMap::new();
    for t in graph.iter() {
        let s = render_term(prefixes, t.subject());
        let p = render_predicate(prefixes, t.predicate());
        let o = render_term(prefixes, t.object());
        blocks.entry(s).or_default().entry(p).or_default().push(o);
    }

    for (subject, predicates) in blocks {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&subject);
        let count = predicates.len();
        for (i, (predicate, mut objects)) in predicates.into_iter().enumerate() {
            objects.sort();
            objects.dedup();
            if i == 0 {
                out.push(' ');
            } else {
                out.push_str("    ");
            }
            out.push_str(&predicate);
            out.push(' ');
            out.push_str(&objects.join(", "));
            out.push_str(if i + 1 == count { " .\n" } else { " ;\n" });
        }
    }
    out
}

fn render_iri(prefixes: &BTreeMap<String, String>, iri: &Iri) -> String {
    shrink_with(prefixes, iri.as_str()).unwrap_or_else(|| format!("<{}>", iri.as_str()))
}

fn render_predicate(prefixes: &BTreeMap<String, String>, iri: &Iri) -> String {
    if iri.as_str() == rdf::TYPE {
        "a".to_owned()
    } else {
        render_iri(prefixes, iri)
    }
}

fn render_term(prefixes: &BTreeMap<String, String>, term: &Term) -> String {
    match term {
        Term::Iri(i) => render_iri(prefixes, i),
        Term::Blank(b) => format!("_:{b}"),
        Term::Literal(l) => {
            let lex = l.lexical();
            if let Some(lang) = l.language() {
                return format!("\"{}\"@{lang}", escape_string(lex));
            }
            let dt = l.datatype().as_str();
            let bare = match dt {
                xsd::STRING => return format!("\"{}\"", escape_string(lex)),
                xsd::INTEGER => is_integer_shorthand(lex),
                xsd::DECIMAL => is_decimal_shorthand(lex),
                xsd::DOUBLE => is_double_shorthand(lex),
                xsd::BOOLEAN => lex == "true" || lex == "false",
                _ => false,
            };
            if bare {
                lex.to_owned()
            } else {
                format!("\"{}\"^^{}", escape_string(lex), render_iri(prefixes, l.datatype()))
            }
        }
    }
}

fn digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn unsigned(s: &str) -> &str {
    s.strip_prefix(['+', '-']).unwrap_or(s)
}

fn is_integer_shorthand(s: &str) -> bool {
    digits(unsigned(s))
}

fn is_decimal_shorthand(s: &str) -> bool {
    match unsigned(s).split_once('.') {
        Some((int, frac)) => (int.is_empty() || digits(int)) && digits(frac),
        None => false,
    }
}

fn is_double_shorthand(s: &str) -> bool {
    let Some((mantissa, exp)) = unsigned(s).split_once(['e', 'E']) else {
        return false;
    };
    let mantissa_ok = match mantissa.split_once('.') {
        Some((int, frac)) => (digits(int) && (frac.is_empty() || digits(frac))) || (int.is_empty() && digits(frac)),
        None => digits(mantissa),
    };
    mantissa_ok && digits(unsigned(exp))
}
