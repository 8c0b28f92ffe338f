//! Turtle subset reader and deterministic writer.
//!
//! Supported: `@prefix`/`@base` (and the `PREFIX`/`BASE` forms), prefixed
//! names, IRI references, the `a` keyword, quoted literals with language tags
//! or datatypes, numeric and boolean shorthands, predicate/object lists,
//! labelled and anonymous blank nodes. Collections and quoted triples are
//! rejected as unsupported.

mod lexer;
mod parser;
mod writer;

use std::fmt;

use thiserror::Error;

use crate::rdf::Graph;

pub(crate) use parser::resolve_relative;
pub use writer::serialize_turtle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TurtleErrorKind {
    Syntax,
    UnknownPrefix,
    Unsupported,
    InvalidIri,
}

impl fmt::Display for TurtleErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Syntax => "syntax error",
            Self::UnknownPrefix => "unknown prefix",
            Self::Unsupported => "unsupported construct",
            Self::InvalidIri => "invalid IRI",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}: {message}")]
pub struct TurtleError {
    pub kind: TurtleErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl TurtleError {
    pub(crate) fn new(kind: TurtleErrorKind, line: usize, column: usize, message: impl Into<String>) -> Self {
        TurtleError {
            kind,
            line: line.max(1),
            column: column.max(1),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Source text together with its parse outcome.
#[derive(Debug, Clone)]
pub struct TurtleDocument {
    pub source_text: String,
    pub parsed_graph: Graph,
    pub parse_diagnostics: Vec<Diagnostic>,
}

impl TurtleDocument {
    pub fn parse(source_text: impl Into<String>) -> Self {
        let source_text = source_text.into();
        let (parsed_graph, parse_diagnostics) = match parse_turtle(&source_text) {
            Ok(g) => (g, Vec::new()),
            Err(e) => (
                Graph::new(),
                vec![Diagnostic {
                    line: e.line,
                    column: e.column,
                    message: format!("{}: {}", e.kind, e.message),
                }],
            ),
        };
        TurtleDocument {
            source_text,
            parsed_graph,
            parse_diagnostics,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.parse_diagnostics.is_empty()
    }
}

/// Parses a Turtle document. Blank nodes are relabelled `b0`, `b1`, ... in
/// order of first appearance.
pub fn parse_turtle(text: &str) -> Result<Graph, TurtleError> {
    let tokens = lexer::Lexer::new(text).tokenize()?;
    parser::Parser::new(tokens).parse_document()
}
