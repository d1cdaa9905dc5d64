use std::collections::HashMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{has_scheme, is_valid_iri_text, vocab, Dataset, Iri, Literal, RdfError, Term, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RdfFormat {
    NTriples,
    Turtle,
}

impl RdfFormat {
    /// Guess from a file extension (`nt` or `ttl`).
    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext.to_ascii_lowercase().as_str() {
            "nt" => Some(RdfFormat::NTriples),
            "ttl" => Some(RdfFormat::Turtle),
            _ => None,
        }
    }
}

impl FromStr for RdfFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "nt" | "ntriples" | "n-triples" => Ok(RdfFormat::NTriples),
            "ttl" | "turtle" => Ok(RdfFormat::Turtle),
            other => Err(format!("unknown RDF format '{other}' (expected ntriples or turtle)")),
        }
    }
}

/// Parse N-Triples or the supported Turtle subset (prefix directives, the `a`
/// keyword, predicate-object and object lists) into a [`Dataset`].
pub fn parse_triples(text: &str, format: RdfFormat) -> Result<Dataset, RdfError> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        prefixes: HashMap::new(),
        format,
        out: Vec::new(),
    };
    parser.document()?;
    Ok(Dataset::from_triples(parser.out))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    Blank(String),
    Str(String),
    LangTag(String),
    Caret2,
    Dot,
    Semi,
    Comma,
    A,
    AtPrefix,
    SparqlPrefix,
    Number(String),
    Boolean(String),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
}

fn syntax(line: usize, message: impl Into<String>) -> RdfError {
    RdfError::Syntax {
        line,
        message: message.into(),
    }
}

fn is_name_char(c: char) -> bool {
    !c.is_whitespace()
        && !matches!(
            c,
            '<' | '>' | '"' | '\'' | '{' | '}' | '|' | '^' | '`' | '\\' | ';' | ',' | '(' | ')' | '[' | ']' | '#'
        )
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next();
        if c == Some('\n') {
            self.line += 1;
        }
        c
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>, RdfError> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            let line = self.line;
            let tok = match c {
                c if c.is_whitespace() => {
                    self.bump();
                    continue;
                }
                '#' => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                    continue;
                }
                '<' => {
                    self.bump();
                    Tok::IriRef(self.iri_ref()?)
                }
                '"' | '\'' => {
                    self.bump();
                    Tok::Str(self.string(c)?)
                }
                '^' => {
                    self.bump();
                    if self.bump() != Some('^') {
                        return Err(syntax(line, "expected '^^'"));
                    }
                    Tok::Caret2
                }
                ';' => {
                    self.bump();
                    Tok::Semi
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '[' | '(' => {
                    return Err(syntax(line, "blank node property lists and collections are not supported"));
                }
                '@' => {
                    self.bump();
                    let mut word = self.name();
                    let trailing_dot = word.len() > 1 && word.ends_with('.');
                    if trailing_dot {
                        word.pop();
                    }
                    if word == "prefix" {
                        Tok::AtPrefix
                    } else if word == "base" {
                        return Err(syntax(line, "@base is not supported; use absolute IRIs"));
                    } else if !word.is_empty()
                        && word.chars().all(|c| c.is_ascii_alphanumeric() || c == '-')
                    {
                        out.push(Spanned { tok: Tok::LangTag(word), line });
                        if trailing_dot {
                            out.push(Spanned { tok: Tok::Dot, line });
                        }
                        continue;
                    } else {
                        return Err(syntax(line, format!("invalid directive or language tag '@{word}'")));
                    }
                }
                _ => {
                    let mut word = self.name();
                    if word.is_empty() {
                        return Err(syntax(line, format!("unexpected character '{c}'")));
                    }
                    let mut trailing_dot = false;
                    if word.ends_with('.') {
                        word.pop();
                        trailing_dot = true;
                    }
                    let tok = if word.is_empty() {
                        Tok::Dot
                    } else {
                        classify(&word, line)?
                    };
                    out.push(Spanned { tok, line });
                    if trailing_dot && !word.is_empty() {
                        out.push(Spanned { tok: Tok::Dot, line });
                    }
                    continue;
                }
            };
            out.push(Spanned { tok, line });
        }
        Ok(out)
    }

    fn name(&mut self) -> String {
        let mut word = String::new();
        while let Some(&c) = self.chars.peek() {
            if !is_name_char(c) {
                break;
            }
            word.push(c);
            self.bump();
        }
        word
    }

    fn iri_ref(&mut self) -> Result<String, RdfError> {
        let line = self.line;
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Err(syntax(line, "unterminated IRI")),
                Some('>') => break,
                Some('\\') => s.push(self.unicode_escape(line)?),
                Some(c) if c.is_whitespace() => return Err(syntax(line, "whitespace inside IRI")),
                Some(c) => s.push(c),
            }
        }
        Ok(s)
    }

    fn unicode_escape(&mut self, line: usize) -> Result<char, RdfError> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(syntax(line, "invalid escape in IRI")),
        };
        self.hex(width, line)
    }

    fn hex(&mut self, width: usize, line: usize) -> Result<char, RdfError> {
        let mut code = String::with_capacity(width);
        for _ in 0..width {
            match self.bump() {
                Some(c) if c.is_ascii_hexdigit() => code.push(c),
                _ => return Err(syntax(line, "invalid unicode escape")),
            }
        }
        u32::from_str_radix(&code, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| syntax(line, "invalid unicode scalar value"))
    }

    fn string(&mut self, quote: char) -> Result<String, RdfError> {
        let line = self.line;
        if self.chars.peek() == Some(&quote) {
            // Either the empty string or the start of a long string.
            self.bump();
            if self.chars.peek() == Some(&quote) {
                return Err(syntax(line, "long (triple-quoted) strings are not supported"));
            }
            return Ok(String::new());
        }
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Err(syntax(line, "unterminated string literal")),
                Some('\n') | Some('\r') => return Err(syntax(line, "newline inside string literal")),
                Some(c) if c == quote => break,
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex(4, line)?,
                        Some('U') => self.hex(8, line)?,
                        _ => return Err(syntax(line, "invalid escape in string literal")),
                    };
                    s.push(c);
                }
                Some(c) => s.push(c),
            }
        }
        Ok(s)
    }
}

fn classify(word: &str, line: usize) -> Result<Tok, RdfError> {
    if word == "a" {
        return Ok(Tok::A);
    }
    if word.eq_ignore_ascii_case("prefix") {
        return Ok(Tok::SparqlPrefix);
    }
    if word.eq_ignore_ascii_case("base") {
        return Err(syntax(line, "BASE is not supported; use absolute IRIs"));
    }
    if word == "true" || word == "false" {
        return Ok(Tok::Boolean(word.to_string()));
    }
    if let Some(label) = word.strip_prefix("_:") {
        if label.is_empty() {
            return Err(syntax(line, "empty blank node label"));
        }
        return Ok(Tok::Blank(label.to_string()));
    }
    let first = word.chars().next().unwrap_or(' ');
    if first.is_ascii_digit() || first == '+' || first == '-' || first == '.' {
        if word.parse::<f64>().is_ok() {
            return Ok(Tok::Number(word.to_string()));
        }
        return Err(syntax(line, format!("invalid numeric literal '{word}'")));
    }
    if let Some((prefix, local)) = word.split_once(':') {
        return Ok(Tok::PName {
            prefix: prefix.to_string(),
            local: local.to_string(),
        });
    }
    Err(syntax(line, format!("unexpected token '{word}'")))
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    prefixes: HashMap<String, String>,
    format: RdfFormat,
    out: Vec<Triple>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|s| &s.tok)
    }

    fn line(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map_or(1, |s| s.line)
    }

    fn next(&mut self) -> Result<(Tok, usize), RdfError> {
        let line = self.line();
        let tok = self
            .tokens
            .get(self.pos)
            .map(|s| s.tok.clone())
            .ok_or_else(|| syntax(line, "unexpected end of input"))?;
        self.pos += 1;
        Ok((tok, line))
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), RdfError> {
        let (tok, line) = self.next()?;
        if tok == want {
            Ok(())
        } else {
            Err(syntax(line, format!("expected {what}, found {tok:?}")))
        }
    }

    fn turtle(&self) -> bool {
        self.format == RdfFormat::Turtle
    }

    fn document(&mut self) -> Result<(), RdfError> {
        while let Some(tok) = self.peek() {
            match tok {
                Tok::AtPrefix | Tok::SparqlPrefix if self.turtle() => self.prefix_directive()?,
                _ => self.triples()?,
            }
        }
        Ok(())
    }

    fn prefix_directive(&mut self) -> Result<(), RdfError> {
        let (directive, _) = self.next()?;
        let (tok, line) = self.next()?;
        let Tok::PName { prefix, local } = tok else {
            return Err(syntax(line, "expected prefix name after prefix directive"));
        };
        if !local.is_empty() {
            return Err(syntax(line, "prefix name must end with ':'"));
        }
        let (tok, line) = self.next()?;
        let Tok::IriRef(ns) = tok else {
            return Err(syntax(line, "expected <namespace IRI> in prefix directive"));
        };
        let ns = absolute(ns, line)?;
        self.prefixes.insert(prefix, ns.as_str().to_string());
        if directive == Tok::AtPrefix {
            self.expect(Tok::Dot, "'.' after @prefix")?;
        }
        Ok(())
    }

    fn triples(&mut self) -> Result<(), RdfError> {
        let subject = self.subject()?;
        loop {
            let predicate = self.predicate()?;
            loop {
                let object = self.object()?;
                self.out.push(Triple {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                if self.turtle() && self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    continue;
                }
                break;
            }
            if self.turtle() && self.peek() == Some(&Tok::Semi) {
                while self.peek() == Some(&Tok::Semi) {
                    self.pos += 1;
                }
                if self.peek() == Some(&Tok::Dot) {
                    break;
                }
                continue;
            }
            break;
        }
        self.expect(Tok::Dot, "'.' at end of statement")
    }

    fn subject(&mut self) -> Result<Term, RdfError> {
        let (tok, line) = self.next()?;
        match tok {
            Tok::IriRef(_) | Tok::PName { .. } => Ok(Term::Iri(self.resolve(tok, line)?)),
            Tok::Blank(label) => Ok(Term::Blank(label)),
            other => Err(syntax(line, format!("expected subject, found {other:?}"))),
        }
    }

    fn predicate(&mut self) -> Result<Iri, RdfError> {
        let (tok, line) = self.next()?;
        match tok {
            Tok::A if self.turtle() => Ok(Iri(vocab::RDF_TYPE.to_string())),
            Tok::IriRef(_) | Tok::PName { .. } => self.resolve(tok, line),
            other => Err(syntax(line, format!("expected predicate IRI, found {other:?}"))),
        }
    }

    fn object(&mut self) -> Result<Term, RdfError> {
        let (tok, line) = self.next()?;
        match tok {
            Tok::IriRef(_) | Tok::PName { .. } => Ok(Term::Iri(self.resolve(tok, line)?)),
            Tok::Blank(label) => Ok(Term::Blank(label)),
            Tok::Str(lexical) => {
                let mut lit = Literal {
                    lexical,
                    datatype: None,
                    language: None,
                };
                match self.peek() {
                    Some(Tok::LangTag(_)) => {
                        if let (Tok::LangTag(lang), _) = self.next()? {
                            lit.language = Some(lang);
                        }
                    }
                    Some(Tok::Caret2) => {
                        self.pos += 1;
                        let (tok, line) = self.next()?;
                        lit.datatype = Some(self.resolve(tok, line)?);
                    }
                    _ => {}
                }
                Ok(Term::Literal(lit))
            }
            Tok::Number(n) if self.turtle() => {
                let dt = if n.contains(['e', 'E']) {
                    vocab::XSD_DOUBLE
                } else if n.contains('.') {
                    vocab::XSD_DECIMAL
                } else {
                    vocab::XSD_INTEGER
                };
                Ok(Term::Literal(Literal {
                    lexical: n,
                    datatype: Some(Iri(dt.to_string())),
                    language: None,
                }))
            }
            Tok::Boolean(b) if self.turtle() => Ok(Term::Literal(Literal {
                lexical: b,
                datatype: Some(Iri(vocab::XSD_BOOLEAN.to_string())),
                language: None,
            })),
            other => Err(syntax(line, format!("expected object, found {other:?}"))),
        }
    }

    fn resolve(&self, tok: Tok, line: usize) -> Result<Iri, RdfError> {
        match tok {
            Tok::IriRef(s) => absolute(s, line),
            Tok::PName { prefix, local } => {
                if !self.turtle() {
                    return Err(syntax(line, "prefixed names are not allowed in N-Triples"));
                }
                let ns = self
                    .prefixes
                    .get(&prefix)
                    .ok_or(RdfError::UnknownPrefix { line, prefix })?;
                absolute(format!("{ns}{local}"), line)
            }
            other => Err(syntax(line, format!("expected IRI, found {other:?}"))),
        }
    }
}

fn absolute(s: String, line: usize) -> Result<Iri, RdfError> {
    if s.is_empty() || !has_scheme(&s) {
        return Err(RdfError::RelativeIri { line, iri: s });
    }
    if !is_valid_iri_text(&s) {
        return Err(syntax(line, format!("invalid characters in IRI <{s}>")));
    }
    Ok(Iri(s))
}
