use std::collections::{BTreeMap, HashMap};

use super::lexer::{Tok, Token};
use super::{TurtleError, TurtleErrorKind};
use crate::ns::{rdf, xsd};
use crate::rdf::{is_absolute_iri, Graph, Iri, Literal, Term, Triple};

pub(crate) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    base: Option<String>,
    graph: Graph,
    prefixes: BTreeMap<String, String>,
    blank_labels: HashMap<String, String>,
    next_blank: usize,
}

type PResult<T> = Result<T, TurtleError>;

impl Parser {
    pub fn new(tokens: Vec<Token>) -> Self {
        Parser {
            tokens,
            pos: 0,
            base: None,
            graph: Graph::new(),
            prefixes: BTreeMap::new(),
            blank_labels: HashMap::new(),
            next_blank: 0,
        }
    }

    pub fn parse_document(mut self) -> PResult<Graph> {
        while self.pos < self.tokens.len() {
            self.statement()?;
        }
        for (label, ns) in std::mem::take(&mut self.prefixes) {
            // prefix labels and namespaces were validated when declared
            let _ = self.graph.set_prefix(&label, &ns);
        }
        Ok(self.graph)
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> PResult<Token> {
        let tok = self.tokens.get(self.pos).cloned().ok_or_else(|| self.eof_error())?;
        self.pos += 1;
        Ok(tok)
    }

    fn eof_error(&self) -> TurtleError {
        let (line, column) = self
            .tokens
            .last()
            .map(|t| (t.line, t.column))
            .unwrap_or((1, 1));
        TurtleError::new(TurtleErrorKind::Syntax, line, column, "unexpected end of document")
    }

    fn error_at(&self, token: &Token, kind: TurtleErrorKind, msg: impl Into<String>) -> TurtleError {
        TurtleError::new(kind, token.line, token.column, msg)
    }

    fn expect(&mut self, want: Tok, what: &str) -> PResult<Token> {
        let tok = self.next()?;
        if tok.tok == want {
            Ok(tok)
        } else {
            Err(self.error_at(&tok, TurtleErrorKind::Syntax, format!("expected {what}, found {:?}", tok.tok)))
        }
    }

    fn statement(&mut self) -> PResult<()> {
        let tok = self.tokens[self.pos].clone();
        match &tok.tok {
            Tok::AtPrefix => {
                self.pos += 1;
                self.prefix_decl()?;
                self.expect(Tok::Dot, "'.' after @prefix")?;
            }
            Tok::AtBase => {
                self.pos += 1;
                self.base_decl()?;
                self.expect(Tok::Dot, "'.' after @base")?;
            }
            Tok::Word(w) if w.eq_ignore_ascii_case("prefix") => {
                self.pos += 1;
                self.prefix_decl()?;
            }
            Tok::Word(w) if w.eq_ignore_ascii_case("base") => {
                self.pos += 1;
                self.base_decl()?;
            }
            _ => {
                self.triples()?;
                self.expect(Tok::Dot, "'.' at end of statement")?;
            }
        }
        Ok(())
    }

    fn prefix_decl(&mut self) -> PResult<()> {
        let tok = self.next()?;
        let Tok::PName { prefix, local } = &tok.tok else {
            return Err(self.error_at(&tok, TurtleErrorKind::Syntax, "expected prefix label"));
        };
        if !local.is_empty() {
            return Err(self.error_at(&tok, TurtleErrorKind::Syntax, "prefix label must end with ':'"));
        }
        let prefix = prefix.clone();
        let iri_tok = self.next()?;
        let ns = self.iri_ref(&iri_tok)?;
        self.prefixes.insert(prefix, ns);
        Ok(())
    }

    fn base_decl(&mut self) -> PResult<()> {
        let tok = self.next()?;
        let iri = self.iri_ref(&tok)?;
        self.base = Some(iri);
        Ok(())
    }

    fn iri_ref(&self, tok: &Token) -> PResult<String> {
        let Tok::IriRef(raw) = &tok.tok else {
            return Err(self.error_at(tok, TurtleErrorKind::Syntax, "expected IRI reference"));
        };
        self.resolve(raw, tok)
    }

    fn resolve(&self, raw: &str, tok: &Token) -> PResult<String> {
        if is_absolute_iri(raw) {
            return Ok(raw.to_owned());
        }
        match &self.base {
            Some(base) => {
                let resolved = resolve_relative(base, raw);
                if is_absolute_iri(&resolved) {
                    Ok(resolved)
                } else {
                    Err(self.error_at(tok, TurtleErrorKind::InvalidIri, format!("cannot resolve <{raw}>")))
                }
            }
            None => Err(self.error_at(
                tok,
                TurtleErrorKind::InvalidIri,
                format!("relative IRI <{raw}> without @base"),
            )),
        }
    }

    fn triples(&mut self) -> PResult<()> {
        if self.peek() == Some(&Tok::LBracket) {
            let subject = self.blank_property_list()?;
            if self.peek() != Some(&Tok::Dot) {
                self.predicate_object_list(&subject)?;
            }
            return Ok(());
        }
        let subject = self.subject()?;
        self.predicate_object_list(&subject)
    }

    fn subject(&mut self) -> PResult<Term> {
        let tok = self.next()?;
        match &tok.tok {
            Tok::IriRef(_) | Tok::PName { .. } => Ok(Term::Iri(self.iri(&tok)?)),
            Tok::BlankLabel(l) => Ok(self.labelled_blank(l)),
            Tok::LParen => Err(self.error_at(&tok, TurtleErrorKind::Unsupported, "collections are not supported")),
            Tok::QuotedOpen => Err(self.error_at(&tok, TurtleErrorKind::Unsupported, "quoted triples are not supported")),
            other => Err(self.error_at(&tok, TurtleErrorKind::Syntax, format!("expected subject, found {other:?}"))),
        }
    }

    fn iri(&self, tok: &Token) -> PResult<Iri> {
        let text = match &tok.tok {
            Tok::IriRef(_) => self.iri_ref(tok)?,
            Tok::PName { prefix, local } => {
                let ns = self.prefixes.get(prefix).ok_or_else(|| {
                    self.error_at(tok, TurtleErrorKind::UnknownPrefix, format!("prefix {prefix:?} is not declared"))
                })?;
                format!("{ns}{local}")
            }
            other => {
                return Err(self.error_at(tok, TurtleErrorKind::Syntax, format!("expected IRI, found {other:?}")));
            }
        };
        Iri::new(text).map_err(|e| self.error_at(tok, TurtleErrorKind::InvalidIri, e.to_string()))
    }

    fn predicate_object_list(&mut self, subject: &Term) -> PResult<()> {
        loop {
            let predicate = self.verb()?;
            self.object_list(subject, &predicate)?;
            if self.peek() != Some(&Tok::Semicolon) {
                return Ok(());
            }
            while self.peek() == Some(&Tok::Semicolon) {
                self.pos += 1;
            }
            // trailing ';' before '.' or ']'
            if matches!(self.peek(), Some(Tok::Dot | Tok::RBracket) | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> PResult<Iri> {
        let tok = self.next()?;
        match &tok.tok {
            Tok::Word(w) if w == "a" => Ok(Iri::from_static(rdf::TYPE)),
            Tok::IriRef(_) | Tok::PName { .. } => self.iri(&tok),
            other => Err(self.error_at(&tok, TurtleErrorKind::Syntax, format!("expected predicate, found {other:?}"))),
        }
    }

    fn object_list(&mut self, subject: &Term, predicate: &Iri) -> PResult<()> {
        loop {
            let object = self.object()?;
            // subject is never a literal here
            self.graph
                .insert(Triple::new(subject.clone(), predicate.clone(), object).expect("non-literal subject"));
            if self.peek() != Some(&Tok::Comma) {
                return Ok(());
            }
            self.pos += 1;
        }
    }

    fn object(&mut self) -> PResult<Term> {
        if self.peek() == Some(&Tok::LBracket) {
            return self.blank_property_list();
        }
        let tok = self.next()?;
        match &tok.tok {
            Tok::IriRef(_) | Tok::PName { .. } => Ok(Term::Iri(self.iri(&tok)?)),
            Tok::BlankLabel(l) => Ok(self.labelled_blank(l)),
            Tok::Str(s) => {
                let s = s.clone();
                self.literal_suffix(s)
            }
            Tok::Integer(n) => Ok(typed(n, xsd::INTEGER)),
            Tok::Decimal(n) => Ok(typed(n, xsd::DECIMAL)),
            Tok::Double(n) => Ok(typed(n, xsd::DOUBLE)),
            Tok::Word(w) if w == "true" || w == "false" => Ok(typed(w, xsd::BOOLEAN)),
            Tok::LParen => Err(self.error_at(&tok, TurtleErrorKind::Unsupported, "collections are not supported")),
            Tok::QuotedOpen => Err(self.error_at(&tok, TurtleErrorKind::Unsupported, "quoted triples are not supported")),
            other => Err(self.error_at(&tok, TurtleErrorKind::Syntax, format!("expected object, found {other:?}"))),
        }
    }

    fn literal_suffix(&mut self, lexical: String) -> PResult<Term> {
        match self.peek() {
            Some(Tok::LangTag(_)) => {
                let tok = self.next()?;
                let Tok::LangTag(tag) = &tok.tok else { unreachable!() };
                Literal::lang(lexical, tag)
                    .map(Term::Literal)
                    .map_err(|e| self.error_at(&tok, TurtleErrorKind::Syntax, e.to_string()))
            }
            Some(Tok::DoubleCaret) => {
                self.pos += 1;
                let tok = self.next()?;
                let dt = self.iri(&tok)?;
                if dt.as_str() == rdf::LANG_STRING {
                    return Err(self.error_at(&tok, TurtleErrorKind::Syntax, "rdf:langString requires a language tag"));
                }
                Ok(Term::Literal(Literal::typed(lexical, dt)))
            }
            _ => Ok(Term::Literal(Literal::string(lexical))),
        }
    }

    fn blank_property_list(&mut self) -> PResult<Term> {
        self.expect(Tok::LBracket, "'['")?;
        let node = self.fresh_blank();
        if self.peek() == Some(&Tok::RBracket) {
            self.pos += 1;
            return Ok(node);
        }
        self.predicate_object_list(&node)?;
        self.expect(Tok::RBracket, "']'")?;
        Ok(node)
    }

    fn fresh_blank(&mut self) -> Term {
        let label = format!("b{}", self.next_blank);
        self.next_blank += 1;
        Term::Blank(label)
    }

    fn labelled_blank(&mut self, label: &str) -> Term {
        if let Some(mapped) = self.blank_labels.get(label) {
            return Term::Blank(mapped.clone());
        }
        let Term::Blank(fresh) = self.fresh_blank() else { unreachable!() };
        self.blank_labels.insert(label.to_owned(), fresh.clone());
        Term::Blank(fresh)
    }
}

fn typed(lexical: &str, datatype: &str) -> Term {
    Term::Literal(Literal::typed(lexical, Iri::from_static(datatype)))
}

/// Reference resolution against a base IRI (RFC 3986 section 5.2, without
/// percent-encoding normalisation).
pub(crate) fn resolve_relative(base: &str, reference: &str) -> String {
    let strip_fragment = |s: &str| s.split('#').next().unwrap_or("").to_owned();
    let scheme_end = base.find(':').map(|i| i + 1).unwrap_or(0);
    let scheme = &base[..scheme_end];
    let after_scheme = &base[scheme_end..];
    let (authority, path_and_rest) = if let Some(rest) = after_scheme.strip_prefix("//") {
        let end = rest.find(['/', '?', '#']).unwrap_or(rest.len());
        (format!("//{}", &rest[..end]), &rest[end..])
    } else {
        (String::new(), after_scheme)
    };
    let base_path = path_and_rest.split(['?', '#']).next().unwrap_or("");

    if reference.is_empty() {
        return strip_fragment(base);
    }
    if reference.starts_with('#') {
        return format!("{}{}", strip_fragment(base), reference);
    }
    if reference.starts_with("//") {
        return format!("{scheme}{reference}");
    }
    if reference.starts_with('?') {
        return format!("{scheme}{authority}{base_path}{reference}");
    }
    let (ref_path, suffix) = match reference.find(['?', '#']) {
        Some(i) => (&reference[..i], &reference[i..]),
        None => (reference, ""),
    };
    let merged = if ref_path.starts_with('/') {
        ref_path.to_owned()
    } else if !authority.is_empty() && base_path.is_empty() {
        format!("/{ref_path}")
    } else {
        let dir = match base_path.rfind('/') {
            Some(i) => &base_path[..=i],
            None => "",
        };
        format!("{dir}{ref_path}")
    };
    format!("{scheme}{authority}{}{suffix}", remove_dot_segments(&merged))
}

fn remove_dot_segments(path: &str) -> String {
    let mut out: Vec<&str> = Vec::new();
    let segments: Vec<&str> = path.split('/').collect();
    for (i, seg) in segments.iter().enumerate() {
        let last = i == segments.len() - 1;
        match *seg {
            "." => {
                if last {
                    out.push("");
                }
            }
            ".." => {
                if out.len() > 1 {
                    out.pop();
                }
                if last {
                    out.push("");
                }
            }
            s => out.push(s),
        }
    }
    out.join("/")
}
