use std::fmt;

use super::RdfError;
use crate::ns::{rdf, xsd};

/// An absolute IRI.
///
/// Validation is deliberately light: a scheme followed by `:` and no
/// whitespace or control characters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(text: impl Into<String>) -> Result<Self, RdfError> {
        let text = text.into();
        if is_absolute_iri(&text) {
            Ok(Iri(text))
        } else {
            Err(RdfError::InvalidIri(text))
        }
    }

    /// Builds an IRI from text known to be valid (crate constants, minted IRIs).
    pub(crate) fn from_static(text: &str) -> Self {
        debug_assert!(is_absolute_iri(text), "invalid IRI constant {text}");
        Iri(text.to_owned())
    }

    pub(crate) fn new_unchecked(text: String) -> Self {
        debug_assert!(is_absolute_iri(&text), "invalid IRI {text}");
        Iri(text)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

pub fn is_absolute_iri(text: &str) -> bool {
    let Some(colon) = text.find(':') else {
        return false;
    };
    let scheme = &text[..colon];
    let mut chars = scheme.chars();
    let scheme_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
    scheme_ok
        && !text
            .chars()
            .any(|c| c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
}

pub fn is_valid_blank_label(label: &str) -> bool {
    !label.is_empty() && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Literal compared structurally by (lexical, datatype, language tag).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    language: Option<String>,
}

impl Literal {
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Iri::from_static(xsd::STRING),
            language: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype,
            language: None,
        }
    }

    pub fn lang(lexical: impl Into<String>, tag: &str) -> Result<Self, RdfError> {
        if !is_valid_language_tag(tag) {
            return Err(RdfError::InvalidLanguageTag(tag.to_owned()));
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype: Iri::from_static(rdf::LANG_STRING),
            language: Some(tag.to_ascii_lowercase()),
        })
    }

    pub fn integer(value: i64) -> Self {
        Self::typed(value.to_string(), Iri::from_static(xsd::INTEGER))
    }

    /// A decimal literal; integral values keep a trailing `.0` so the
    /// lexical form stays in the decimal shorthand grammar.
    pub fn decimal(value: f64) -> Self {
        Self::typed(format_decimal(value), Iri::from_static(xsd::DECIMAL))
    }

    pub fn boolean(value: bool) -> Self {
        Self::typed(value.to_string(), Iri::from_static(xsd::BOOLEAN))
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    /// Numeric value when the lexical form parses as a finite number.
    pub fn as_f64(&self) -> Option<f64> {
        if self.language.is_some() {
            return None;
        }
        let v: f64 = self.lexical.trim().parse().ok()?;
        v.is_finite().then_some(v)
    }
}

pub fn format_decimal(value: f64) -> String {
    let mut s = format!("{value}");
    if !s.contains('.') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

fn is_valid_language_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let first = parts.next().unwrap_or("");
    !first.is_empty()
        && first.len() <= 8
        && first.chars().all(|c| c.is_ascii_alphabetic())
        && parts.all(|p| !p.is_empty() && p.len() <= 8 && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(String),
    Literal(Literal),
}

impl Term {
    pub fn iri(text: &str) -> Result<Self, RdfError> {
        Ok(Term::Iri(Iri::new(text)?))
    }

    pub fn blank(label: &str) -> Result<Self, RdfError> {
        if is_valid_blank_label(label) {
            Ok(Term::Blank(label.to_owned()))
        } else {
            Err(RdfError::InvalidBlankLabel(label.to_owned()))
        }
    }

    pub fn string(text: impl Into<String>) -> Self {
        Term::Literal(Literal::string(text))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    /// IRI text or literal lexical form; blank labels are prefixed `_:`.
    pub fn value_text(&self) -> String {
        match self {
            Term::Iri(i) => i.as_str().to_owned(),
            Term::Blank(b) => format!("_:{b}"),
            Term::Literal(l) => l.lexical.clone(),
        }
    }
}

impl From<Iri> for Term {
    fn from(i: Iri) -> Self {
        Term::Iri(i)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

impl serde::Serialize for Iri {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

/// Serialized as the N-Triples rendering.
impl serde::Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// N-Triples style rendering; used as the canonical sort key.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => write!(f, "{i}"),
            Term::Blank(b) => write!(f, "_:{b}"),
            Term::Literal(l) => {
                write!(f, "\"{}\"", escape_string(&l.lexical))?;
                if let Some(lang) = &l.language {
                    write!(f, "@{lang}")
                } else if l.datatype.as_str() == xsd::STRING {
                    Ok(())
                } else {
                    write!(f, "^^{}", l.datatype)
                }
            }
        }
    }
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}
