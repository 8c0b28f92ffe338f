//! SELECT query types and the text parser for the supported subset:
//!
//! ```text
//! [PREFIX p: <iri>]*
//! SELECT [DISTINCT] (?v ... | *) [WHERE] {
//!     triple patterns separated by '.', with ';' and ',' lists
//!     FILTER(?v op term) | FILTER regex(?v, "pattern")
//! }
//! [ORDER BY [ASC|DESC](?v) | ?v] [LIMIT n]
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::ns::{rdf, xsd};
use crate::rdf::{is_absolute_iri, Iri, Literal, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: unsupported construct: {construct}")]
    Unsupported { line: usize, column: usize, construct: String },
    #[error("{line}:{column}: unknown prefix {prefix:?}")]
    UnknownPrefix { line: usize, column: usize, prefix: String },
    #[error("malformed query: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternTerm {
    Term(Term),
    Var(String),
}

impl PatternTerm {
    pub fn var(name: &str) -> Self {
        PatternTerm::Var(name.to_owned())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Term(t)
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Term(t) => write!(f, "{t}"),
            PatternTerm::Var(v) => write!(f, "?{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(subject: impl Into<PatternTerm>, predicate: impl Into<PatternTerm>, object: impl Into<PatternTerm>) -> Self {
        TriplePattern {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        [&self.subject, &self.predicate, &self.object]
            .into_iter()
            .filter_map(PatternTerm::as_var)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Regex,
}

impl Comparator {
    fn flipped(self) -> Self {
        match self {
            Comparator::Lt => Comparator::Gt,
            Comparator::Le => Comparator::Ge,
            Comparator::Gt => Comparator::Lt,
            Comparator::Ge => Comparator::Le,
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterOperand {
    Term(Term),
    Pattern(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filter {
    pub variable: String,
    pub comparator: Comparator,
    pub operand: FilterOperand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Ascending,
    Descending,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderBy {
    pub variable: String,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    All,
    Vars(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectQuery {
    pub projection: Projection,
    pub patterns: Vec<TriplePattern>,
    pub filters: Vec<Filter>,
    pub distinct: bool,
    pub order_by: Option<OrderBy>,
    pub limit: Option<usize>,
}

impl SelectQuery {
    /// Variables in order of first appearance in the patterns.
    pub fn pattern_variables(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for p in &self.patterns {
            for v in p.variables() {
                if seen.insert(v) {
                    out.push(v.to_owned());
                }
            }
        }
        out
    }

    pub fn projected_variables(&self) -> Vec<String> {
        match &self.projection {
            Projection::All => self.pattern_variables(),
            Projection::Vars(v) => v.clone(),
        }
    }

    /// Every projected, filtered or ordered variable must occur in a pattern.
    pub fn validate(&self) -> Result<(), QueryError> {
        if self.patterns.is_empty() {
            return Err(QueryError::Malformed("query has no triple patterns".into()));
        }
        let bound: BTreeSet<String> = self.pattern_variables().into_iter().collect();
        let check = |v: &str, role: &str| {
            if !is_var_name(v) {
                return Err(QueryError::Malformed(format!("invalid variable name {v:?}")));
            }
            if bound.contains(v) {
                Ok(())
            } else {
                Err(QueryError::Malformed(format!("{role} variable ?{v} does not occur in any pattern")))
            }
        };
        if let Projection::Vars(vars) = &self.projection {
            if vars.is_empty() {
                return Err(QueryError::Malformed("empty projection".into()));
            }
            for v in vars {
                check(v, "projected")?;
            }
        }
        for f in &self.filters {
            check(&f.variable, "filtered")?;
            if let FilterOperand::Pattern(p) = &f.operand {
                regex::Regex::new(p).map_err(|e| QueryError::Malformed(format!("invalid regex: {e}")))?;
            }
        }
        if let Some(o) = &self.order_by {
            check(&o.variable, "ordered")?;
        }
        Ok(())
    }
}

pub fn is_var_name(v: &str) -> bool {
    let mut chars = v.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

// ---- lexer ---------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Var(String),
    Iri(String),
    PName(String, String),
    Str(String),
    LangTag(String),
    Number(String, &'static str),
    Word(String),
    Punct(&'static str),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, QueryError> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let (mut line, mut col) = (1usize, 1usize);
    let mut out = Vec::new();
    let syntax = |line, column, message: String| QueryError::Syntax { line, column, message };

    macro_rules! advance {
        ($n:expr) => {
            for _ in 0..$n {
                if chars[i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                i += 1;
            }
        };
    }

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance!(1);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance!(1);
            }
            continue;
        }
        let (tl, tc) = (line, col);
        let next = chars.get(i + 1).copied();
        let tok = if c == '?' || c == '$' {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            if j == i + 1 {
                // bare '?' after an IRI is a property path modifier
                advance!(1);
                out.push(Token { tok: Tok::Punct("?"), line: tl, column: tc });
                continue;
            }
            let name: String = chars[i + 1..j].iter().collect();
            advance!(j - i);
            Tok::Var(name)
        } else if c == '<' {
            // IRI reference if a closing '>' follows without whitespace
            let mut j = i + 1;
            while j < chars.len() && !chars[j].is_whitespace() && chars[j] != '>' && chars[j] != '<' {
                j += 1;
            }
            if j < chars.len() && chars[j] == '>' && j > i + 1 && next != Some('=') {
                let iri: String = chars[i + 1..j].iter().collect();
                advance!(j - i + 1);
                Tok::Iri(iri)
            } else if next == Some('=') {
                advance!(2);
                Tok::Punct("<=")
            } else {
                advance!(1);
                Tok::Punct("<")
            }
        } else if c == '"' || c == '\'' {
            let mut j = i + 1;
            let mut s = String::new();
            loop {
                let Some(&d) = chars.get(j) else {
                    return Err(syntax(tl, tc, "unterminated string".into()));
                };
                if d == c {
                    break;
                }
                if d == '\n' {
                    return Err(syntax(tl, tc, "line break in string".into()));
                }
                if d == '\\' {
                    let e = chars.get(j + 1).copied();
                    s.push(match e {
                        Some('n') => '\n',
                        Some('t') => '\t',
                        Some('r') => '\r',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        _ => return Err(syntax(tl, tc, "invalid escape".into())),
                    });
                    j += 2;
                    continue;
                }
                s.push(d);
                j += 1;
            }
            advance!(j - i + 1);
            Tok::Str(s)
        } else if c == '@' {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '-') {
                j += 1;
            }
            let tag: String = chars[i + 1..j].iter().collect();
            advance!(j - i);
            Tok::LangTag(tag)
        } else if c.is_ascii_digit() || ((c == '-' || c == '+') && next.is_some_and(|d| d.is_ascii_digit())) {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let mut kind = xsd::INTEGER;
            if j + 1 < chars.len() && chars[j] == '.' && chars[j + 1].is_ascii_digit() {
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                kind = xsd::DECIMAL;
            }
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                let mut k = j + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    j = k;
                    kind = xsd::DOUBLE;
                }
            }
            let n: String = chars[i..j].iter().collect();
            advance!(j - i);
            Tok::Number(n, kind)
        } else if c.is_alphabetic() || c == '_' || c == ':' {
            let mut j = i;
            while j < chars.len()
                && (chars[j].is_alphanumeric() || matches!(chars[j], '_' | '-' | ':' | '.' | '%'))
            {
                j += 1;
            }
            while j > i && chars[j - 1] == '.' {
                j -= 1;
            }
            let word: String = chars[i..j].iter().collect();
            advance!(j - i);
            match word.split_once(':') {
                Some((p, l)) => Tok::PName(p.to_owned(), l.to_owned()),
                None => Tok::Word(word),
            }
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let p: &'static str = match two.as_str() {
                "!=" => "!=",
                ">=" => ">=",
                "&&" => "&&",
                "||" => "||",
                "^^" => "^^",
                _ => match c {
                    '{' => "{",
                    '}' => "}",
                    '(' => "(",
                    ')' => ")",
                    '.' => ".",
                    ';' => ";",
                    ',' => ",",
                    '=' => "=",
                    '>' => ">",
                    '*' => "*",
                    '/' => "/",
                    '|' => "|",
                    '^' => "^",
                    '+' => "+",
                    '!' => "!",
                    _ => return Err(syntax(tl, tc, format!("unexpected character {c:?}"))),
                },
            };
            advance!(p.chars().count());
            Tok::Punct(p)
        };
        out.push(Token { tok, line: tl, column: tc });
    }
    Ok(out)
}

// ---- parser --------------------------------------------------------------

const UNSUPPORTED_KEYWORDS: &[&str] = &[
    "OPTIONAL", "UNION", "MINUS", "GRAPH", "SERVICE", "BIND", "VALUES", "CONSTRUCT", "ASK", "DESCRIBE", "GROUP",
    "HAVING", "OFFSET", "FROM", "INSERT", "DELETE", "EXISTS", "NOT",
];

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    prefixes: BTreeMap<String, String>,
    base: Option<String>,
    text: &'a str,
}

/// Parses query text; prefixed names resolve against the query's own
/// `PREFIX` declarations first, then `prefixes`.
pub fn parse_query(text: &str, prefixes: &BTreeMap<String, String>) -> Result<SelectQuery, QueryError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        prefixes: prefixes.clone(),
        base: None,
        text,
    };
    let q = p.query()?;
    q.validate()?;
    Ok(q)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.tokens.get(self.pos) {
            Some(t) => (t.line, t.column),
            None => crate::report::line_column(self.text, self.text.len()),
        }
    }

    fn syntax(&self, message: impl Into<String>) -> QueryError {
        let (line, column) = self.here();
        QueryError::Syntax { line, column, message: message.into() }
    }

    fn unsupported(&self, construct: impl Into<String>) -> QueryError {
        let (line, column) = self.here();
        QueryError::Unsupported { line, column, construct: construct.into() }
    }

    fn next(&mut self) -> Result<Tok, QueryError> {
        let t = self
            .tokens
            .get(self.pos)
            .map(|t| t.tok.clone())
            .ok_or_else(|| self.syntax("unexpected end of query"))?;
        self.pos += 1;
        Ok(t)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(x)) if x.eq_ignore_ascii_case(w))
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(x)) if *x == p)
    }

    fn expect_word(&mut self, w: &str) -> Result<(), QueryError> {
        if self.is_word(w) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(format!("expected {w}")))
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), QueryError> {
        if self.is_punct(p) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(format!("expected '{p}'")))
        }
    }

    fn check_unsupported_word(&self) -> Result<(), QueryError> {
        if let Some(Tok::Word(w)) = self.peek() {
            let upper = w.to_ascii_uppercase();
            if UNSUPPORTED_KEYWORDS.contains(&upper.as_str()) {
                return Err(self.unsupported(upper));
            }
        }
        Ok(())
    }

    fn query(&mut self) -> Result<SelectQuery, QueryError> {
        loop {
            if self.is_word("PREFIX") {
                self.pos += 1;
                let Tok::PName(label, local) = self.next()? else {
                    return Err(self.syntax("expected prefix label"));
                };
                if !local.is_empty() {
                    return Err(self.syntax("prefix label must end with ':'"));
                }
                let Tok::Iri(ns) = self.next()? else {
                    return Err(self.syntax("expected namespace IRI"));
                };
                self.prefixes.insert(label, ns);
            } else if self.is_word("BASE") {
                self.pos += 1;
                let Tok::Iri(b) = self.next()? else {
                    return Err(self.syntax("expected base IRI"));
                };
                self.base = Some(b);
            } else {
                break;
            }
        }
        self.check_unsupported_word()?;
        self.expect_word("SELECT")?;
        let distinct = if self.is_word("DISTINCT") {
            self.pos += 1;
            true
        } else {
            if self.is_word("REDUCED") {
                return Err(self.unsupported("REDUCED"));
            }
            false
        };
        let projection = if self.is_punct("*") {
            self.pos += 1;
            Projection::All
        } else {
            let mut vars = Vec::new();
            while let Some(Tok::Var(v)) = self.peek() {
                vars.push(v.clone());
                self.pos += 1;
            }
            if self.is_punct("(") {
                return Err(self.unsupported("projection expressions"));
            }
            if vars.is_empty() {
                return Err(self.syntax("expected variables or '*' after SELECT"));
            }
            Projection::Vars(vars)
        };
        self.check_unsupported_word()?;
        if self.is_word("WHERE") {
            self.pos += 1;
        }
        self.expect_punct("{")?;
        let (patterns, filters) = self.group()?;
        self.expect_punct("}")?;

        let mut order_by = None;
        let mut limit = None;
        if self.is_word("ORDER") {
            self.pos += 1;
            self.expect_word("BY")?;
            let direction = if self.is_word("ASC") {
                self.pos += 1;
                Some(Direction::Ascending)
            } else if self.is_word("DESC") {
                self.pos += 1;
                Some(Direction::Descending)
            } else {
                None
            };
            let variable = if direction.is_some() || self.is_punct("(") {
                self.expect_punct("(")?;
                let Tok::Var(v) = self.next()? else {
                    return Err(self.syntax("expected variable in ORDER BY"));
                };
                self.expect_punct(")")?;
                v
            } else {
                match self.next()? {
                    Tok::Var(v) => v,
                    _ => return Err(self.syntax("expected variable in ORDER BY")),
                }
            };
            if matches!(self.peek(), Some(Tok::Var(_))) {
                return Err(self.unsupported("multiple ORDER BY keys"));
            }
            order_by = Some(OrderBy {
                variable,
                direction: direction.unwrap_or_default(),
            });
        }
        self.check_unsupported_word()?;
        if self.is_word("LIMIT") {
            self.pos += 1;
            match self.next()? {
                Tok::Number(n, kind) if kind == xsd::INTEGER && !n.starts_with(['-', '+']) => {
                    limit = Some(n.parse().map_err(|_| self.syntax("LIMIT out of range"))?);
                }
                _ => return Err(self.syntax("expected non-negative integer after LIMIT")),
            }
        }
        self.check_unsupported_word()?;
        if self.pos < self.tokens.len() {
            return Err(self.syntax("unexpected trailing input"));
        }
        Ok(SelectQuery {
            projection,
            patterns,
            filters,
            distinct,
            order_by,
            limit,
        })
    }

    fn group(&mut self) -> Result<(Vec<TriplePattern>, Vec<Filter>), QueryError> {
        let mut patterns = Vec::new();
        let mut filters = Vec::new();
        loop {
            self.check_unsupported_word()?;
            if self.is_punct("}") || self.peek().is_none() {
                break;
            }
            if self.is_punct("{") {
                return Err(self.unsupported("nested group patterns"));
            }
            if self.is_word("FILTER") {
                self.pos += 1;
                filters.push(self.filter()?);
                if self.is_punct(".") {
                    self.pos += 1;
                }
                continue;
            }
            self.triples_same_subject(&mut patterns)?;
            if self.is_punct(".") {
                self.pos += 1;
            } else if !self.is_punct("}") && !self.is_word("FILTER") {
                self.check_unsupported_word()?;
                return Err(self.syntax("expected '.' or '}' after triple pattern"));
            }
        }
        Ok((patterns, filters))
    }

    fn triples_same_subject(&mut self, out: &mut Vec<TriplePattern>) -> Result<(), QueryError> {
        let subject = self.pattern_term(false)?;
        if matches!(subject, PatternTerm::Term(Term::Literal(_))) {
            return Err(self.syntax("literal in subject position"));
        }
        loop {
            let predicate = if self.is_word("a") {
                self.pos += 1;
                PatternTerm::Term(Term::Iri(Iri::from_static(rdf::TYPE)))
            } else {
                let p = self.pattern_term(false)?;
                if matches!(p, PatternTerm::Term(Term::Literal(_))) {
                    return Err(self.syntax("literal in predicate position"));
                }
                p
            };
            if ["/", "|", "^", "*", "+", "?"].iter().any(|p| self.is_punct(p)) {
                return Err(self.unsupported("property paths"));
            }
            loop {
                let object = self.pattern_term(true)?;
                out.push(TriplePattern {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                if self.is_punct(",") {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if self.is_punct(";") {
                self.pos += 1;
                if self.is_punct(".") || self.is_punct("}") {
                    break;
                }
            } else {
                break;
            }
        }
        Ok(())
    }

    fn pattern_term(&mut self, allow_literal: bool) -> Result<PatternTerm, QueryError> {
        if self.is_punct("^") {
            return Err(self.unsupported("property paths"));
        }
        if self.is_punct("[") || self.is_punct("(") {
            return Err(self.unsupported("blank node syntax in patterns"));
        }
        if let Some(Tok::Var(v)) = self.peek() {
            let v = v.clone();
            self.pos += 1;
            return Ok(PatternTerm::Var(v));
        }
        let t = self.ground_term()?;
        if !allow_literal && matches!(t, Term::Literal(_)) {
            return Err(self.syntax("literal not allowed here"));
        }
        Ok(PatternTerm::Term(t))
    }

    fn ground_term(&mut self) -> Result<Term, QueryError> {
        let (line, column) = self.here();
        match self.next()? {
            Tok::Iri(i) => self.resolve_iri(&i, line, column).map(Term::Iri),
            Tok::PName(prefix, local) => {
                let ns = self.prefixes.get(&prefix).ok_or(QueryError::UnknownPrefix {
                    line,
                    column,
                    prefix: prefix.clone(),
                })?;
                Iri::new(format!("{ns}{local}"))
                    .map(Term::Iri)
                    .map_err(|e| QueryError::Syntax { line, column, message: e.to_string() })
            }
            Tok::Str(s) => {
                if let Some(Tok::LangTag(tag)) = self.peek() {
                    let tag = tag.clone();
                    self.pos += 1;
                    return Literal::lang(s, &tag)
                        .map(Term::Literal)
                        .map_err(|e| QueryError::Syntax { line, column, message: e.to_string() });
                }
                if self.is_punct("^^") {
                    self.pos += 1;
                    let Term::Iri(dt) = self.ground_term()? else {
                        return Err(self.syntax("expected datatype IRI"));
                    };
                    return Ok(Term::Literal(Literal::typed(s, dt)));
                }
                Ok(Term::string(s))
            }
            Tok::Number(n, kind) => Ok(Term::Literal(Literal::typed(n, Iri::from_static(kind)))),
            Tok::Word(w) if w == "true" || w == "false" => {
                Ok(Term::Literal(Literal::typed(w, Iri::from_static(xsd::BOOLEAN))))
            }
            Tok::Word(w) => {
                let upper = w.to_ascii_uppercase();
                if UNSUPPORTED_KEYWORDS.contains(&upper.as_str()) {
                    Err(QueryError::Unsupported { line, column, construct: upper })
                } else {
                    Err(QueryError::Syntax { line, column, message: format!("unexpected word {w:?}") })
                }
            }
            other => Err(QueryError::Syntax {
                line,
                column,
                message: format!("expected term, found {other:?}"),
            }),
        }
    }

    fn resolve_iri(&self, raw: &str, line: usize, column: usize) -> Result<Iri, QueryError> {
        let text = if is_absolute_iri(raw) {
            raw.to_owned()
        } else if let Some(base) = &self.base {
            crate::turtle::resolve_relative(base, raw)
        } else {
            return Err(QueryError::Syntax { line, column, message: format!("relative IRI <{raw}> without BASE") });
        };
        Iri::new(text).map_err(|e| QueryError::Syntax { line, column, message: e.to_string() })
    }

    fn filter(&mut self) -> Result<Filter, QueryError> {
        let wrapped = self.is_punct("(");
        if wrapped {
            self.pos += 1;
        }
        let filter = if self.is_word("regex") {
            self.pos += 1;
            self.expect_punct("(")?;
            let Tok::Var(variable) = self.next()? else {
                return Err(self.syntax("regex expects a variable as first argument"));
            };
            self.expect_punct(",")?;
            let Tok::Str(mut pattern) = self.next()? else {
                return Err(self.syntax("regex expects a string pattern"));
            };
            if self.is_punct(",") {
                self.pos += 1;
                let Tok::Str(flags) = self.next()? else {
                    return Err(self.syntax("regex flags must be a string"));
                };
                if flags.chars().any(|c| !"imsx".contains(c)) {
                    return Err(self.unsupported(format!("regex flags {flags:?}")));
                }
                if !flags.is_empty() {
                    pattern = format!("(?{flags}){pattern}");
                }
            }
            self.expect_punct(")")?;
            Filter {
                variable,
                comparator: Comparator::Regex,
                operand: FilterOperand::Pattern(pattern),
            }
        } else {
            if !wrapped {
                return Err(self.syntax("expected '(' after FILTER"));
            }
            let (left_var, left_term) = match self.peek() {
                Some(Tok::Var(v)) => {
                    let v = v.clone();
                    self.pos += 1;
                    (Some(v), None)
                }
                _ => (None, Some(self.ground_term()?)),
            };
            let comparator = match self.next()? {
                Tok::Punct("=") => Comparator::Eq,
                Tok::Punct("!=") => Comparator::Ne,
                Tok::Punct("<") => Comparator::Lt,
                Tok::Punct("<=") => Comparator::Le,
                Tok::Punct(">") => Comparator::Gt,
                Tok::Punct(">=") => Comparator::Ge,
                Tok::Punct(p @ ("&&" | "||" | "!")) => return Err(self.unsupported(format!("operator {p}"))),
                _ => return Err(self.syntax("expected comparison operator")),
            };
            match (left_var, left_term) {
                (Some(variable), _) => {
                    if let Some(Tok::Var(_)) = self.peek() {
                        return Err(self.unsupported("variable-to-variable comparison"));
                    }
                    let t = self.ground_term()?;
                    Filter { variable, comparator, operand: FilterOperand::Term(t) }
                }
                (None, Some(t)) => {
                    let Tok::Var(variable) = self.next()? else {
                        return Err(self.syntax("comparison needs a variable"));
                    };
                    Filter {
                        variable,
                        comparator: comparator.flipped(),
                        operand: FilterOperand::Term(t),
                    }
                }
                (None, None) => unreachable!(),
            }
        };
        if self.is_punct("&&") || self.is_punct("||") {
            return Err(self.unsupported("compound filter expressions"));
        }
        if wrapped {
            self.expect_punct(")")?;
        }
        Ok(filter)
    }
}
