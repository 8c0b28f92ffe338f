use super::{TurtleError, TurtleErrorKind};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    BlankLabel(String),
    Str(String),
    LangTag(String),
    Integer(String),
    Decimal(String),
    Double(String),
    /// Bare word without a colon: `a`, `true`, `false`, `PREFIX`, `BASE`, ...
    Word(String),
    AtPrefix,
    AtBase,
    Dot,
    Semicolon,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    DoubleCaret,
    QuotedOpen,
    QuotedClose,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':' | '%' | '\\') || (!c.is_ascii() && !c.is_whitespace())
}

impl<'a> Lexer<'a> {
    pub fn new(text: &'a str) -> Self {
        let text = text.strip_prefix('\u{FEFF}').unwrap_or(text);
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    pub fn tokenize(mut self) -> Result<Vec<Token>, TurtleError> {
        let mut out = Vec::new();
        while let Some(tok) = self.next_token()? {
            out.push(tok);
        }
        Ok(out)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }

    fn err(&self, line: usize, column: usize, msg: impl Into<String>) -> TurtleError {
        TurtleError::new(TurtleErrorKind::Syntax, line, column, msg)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<Option<Token>, TurtleError> {
        self.skip_ws();
        let (line, column) = (self.line, self.column);
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let tok = match c {
            '<' => {
                if self.peek2() == Some('<') {
                    self.bump();
                    self.bump();
                    Tok::QuotedOpen
                } else {
                    self.iri_ref(line, column)?
                }
            }
            '>' if self.peek2() == Some('>') => {
                self.bump();
                self.bump();
                Tok::QuotedClose
            }
            '"' | '\'' => self.string(c, line, column)?,
            '@' => {
                self.bump();
                let mut word = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' {
                        word.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                match word.as_str() {
                    "prefix" => Tok::AtPrefix,
                    "base" => Tok::AtBase,
                    "" => return Err(self.err(line, column, "expected directive or language tag after '@'")),
                    _ => Tok::LangTag(word),
                }
            }
            '_' if self.peek2() == Some(':') => {
                self.bump();
                self.bump();
                let mut label = String::new();
                let label_char = |c: char| c.is_alphanumeric() || matches!(c, '_' | '-' | '.');
                while let Some(c) = self.peek() {
                    // a '.' not followed by a label character terminates the statement
                    if !label_char(c) || (c == '.' && !self.peek2().is_some_and(label_char)) {
                        break;
                    }
                    label.push(c);
                    self.bump();
                }
                if label.is_empty() {
                    return Err(self.err(line, column, "empty blank node label"));
                }
                Tok::BlankLabel(label)
            }
            '.' if !self.peek2().is_some_and(|d| d.is_ascii_digit()) => {
                self.bump();
                Tok::Dot
            }
            ';' => {
                self.bump();
                Tok::Semicolon
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            '[' => {
                self.bump();
                Tok::LBracket
            }
            ']' => {
                self.bump();
                Tok::RBracket
            }
            '(' => {
                self.bump();
                Tok::LParen
            }
            ')' => {
                self.bump();
                Tok::RParen
            }
            '^' => {
                self.bump();
                if self.peek() != Some('^') {
                    return Err(self.err(line, column, "expected '^^'"));
                }
                self.bump();
                Tok::DoubleCaret
            }
            c if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => self.number(line, column)?,
            c if c == ':' || c.is_alphabetic() || c == '_' => self.name(line, column)?,
            other => {
                return Err(self.err(line, column, format!("unexpected character {other:?}")));
            }
        };
        Ok(Some(Token { tok, line, column }))
    }

    fn iri_ref(&mut self, line: usize, column: usize) -> Result<Tok, TurtleError> {
        self.bump();
        let mut iri = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(self.err(line, column, "unterminated IRI"));
            };
            match c {
                '>' => break,
                '\\' => iri.push(self.unicode_escape(line, column)?),
                c if c.is_whitespace() || c.is_control() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') => {
                    return Err(self.err(line, column, format!("invalid character {c:?} in IRI")));
                }
                c => iri.push(c),
            }
        }
        Ok(Tok::IriRef(iri))
    }

    fn unicode_escape(&mut self, line: usize, column: usize) -> Result<char, TurtleError> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(self.err(line, column, "invalid escape in IRI")),
        };
        self.hex_char(width, line, column)
    }

    fn hex_char(&mut self, width: usize, line: usize, column: usize) -> Result<char, TurtleError> {
        let mut hex = String::new();
        for _ in 0..width {
            match self.bump() {
                Some(h) if h.is_ascii_hexdigit() => hex.push(h),
                _ => return Err(self.err(line, column, "malformed unicode escape")),
            }
        }
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.err(line, column, "escape is not a unicode scalar value"))
    }

    fn string(&mut self, quote: char, line: usize, column: usize) -> Result<Tok, TurtleError> {
        self.bump();
        let long = self.peek() == Some(quote) && self.peek2() == Some(quote);
        if long {
            self.bump();
            self.bump();
        } else if self.peek() == Some(quote) {
            self.bump();
            return Ok(Tok::Str(String::new()));
        }
        let mut s = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(self.err(line, column, "unterminated string"));
            };
            match c {
                '\\' => {
                    let esc = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_char(4, line, column)?,
                        Some('U') => self.hex_char(8, line, column)?,
                        _ => return Err(self.err(self.line, self.column.saturating_sub(1).max(1), "invalid string escape")),
                    };
                    s.push(esc);
                }
                c if c == quote && !long => break,
                c if c == quote && long => {
                    if self.peek() == Some(quote) && self.peek2() == Some(quote) {
                        self.bump();
                        self.bump();
                        // """a"""" closes after the first three quotes that are followed by no more quotes
                        while self.peek() == Some(quote) {
                            s.push(quote);
                            self.bump();
                        }
                        break;
                    }
                    s.push(c);
                }
                '\n' | '\r' if !long => {
                    return Err(self.err(line, column, "line break in short string"));
                }
                c => s.push(c),
            }
        }
        Ok(Tok::Str(s))
    }

    fn number(&mut self, line: usize, column: usize) -> Result<Tok, TurtleError> {
        let mut s = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            s.push(c);
            self.bump();
        }
        let mut int_digits = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
            int_digits += 1;
        }
        let mut frac_digits = 0;
        if self.peek() == Some('.') && self.peek2().is_some_and(|c| c.is_ascii_digit()) {
            s.push('.');
            self.bump();
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                s.push(c);
                self.bump();
                frac_digits += 1;
            }
        } else if self.peek() == Some('.') && matches!(self.peek2(), Some('e' | 'E')) && int_digits > 0 {
            s.push('.');
            self.bump();
        }
        if int_digits == 0 && frac_digits == 0 {
            return Err(self.err(line, column, "malformed number"));
        }
        if let Some(e @ ('e' | 'E')) = self.peek() {
            s.push(e);
            self.bump();
            if let Some(c @ ('+' | '-')) = self.peek() {
                s.push(c);
                self.bump();
            }
            let mut exp_digits = 0;
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                s.push(c);
                self.bump();
                exp_digits += 1;
            }
            if exp_digits == 0 {
                return Err(self.err(line, column, "malformed exponent"));
            }
            return Ok(Tok::Double(s));
        }
        Ok(if s.contains('.') { Tok::Decimal(s) } else { Tok::Integer(s) })
    }

    fn name(&mut self, line: usize, column: usize) -> Result<Tok, TurtleError> {
        let mut raw = String::new();
        while let Some(c) = self.peek() {
            if !is_name_char(c) {
                break;
            }
            // '.' only continues a name when another name char follows
            if c == '.' && !self.peek2().is_some_and(is_name_char) {
                break;
            }
            raw.push(c);
            self.bump();
            if c == '\\' {
                match self.bump() {
                    Some(e) => raw.push(e),
                    None => return Err(self.err(line, column, "dangling escape in name")),
                }
            }
        }
        if raw.ends_with('.') && !raw.ends_with("\\.") {
            return Err(self.err(line, column, "name ends with '.'"));
        }
        let Some(colon) = raw.find(':') else {
            return Ok(Tok::Word(raw));
        };
        let prefix = raw[..colon].to_owned();
        if !crate::rdf::is_valid_prefix_label(&prefix) {
            return Err(self.err(line, column, format!("invalid prefix {prefix:?}")));
        }
        let mut local = String::new();
        let mut it = raw[colon + 1..].chars();
        while let Some(c) = it.next() {
            if c == '\\' {
                let e = it.next().unwrap_or('\\');
                if !"_~.-!$&'()*+,;=/?#@%".contains(e) {
                    return Err(self.err(line, column, format!("invalid local name escape \\{e}")));
                }
                local.push(e);
            } else {
                local.push(c);
            }
        }
        Ok(Tok::PName { prefix, local })
    }
}
