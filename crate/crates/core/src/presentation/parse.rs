//! Text grammar for presentations and substitution maps.
//!
//! ```text
//! # comment
//! gens: a b
//! rel: a^4
//! rel: [a,b]*(a*b^-1)^3
//! ```
//!
//! `word := term ('*' term)*`, `term := atom ('^' integer)?`,
//! `atom := ident | '1' | '(' word ')' | '[' word ',' word ']'`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownIdentifier(String),
    DuplicateGenerator(String),
    NonIntegerExponent(String),
    InvalidIdentifier(String),
    MissingHeader(&'static str),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ParseErrorKind::UnknownIdentifier(s) => write!(f, "unknown identifier `{s}`"),
            ParseErrorKind::DuplicateGenerator(s) => write!(f, "duplicate generator `{s}`"),
            ParseErrorKind::NonIntegerExponent(s) => write!(f, "non-integer exponent `{s}`"),
            ParseErrorKind::InvalidIdentifier(s) => write!(f, "invalid identifier `{s}`"),
            ParseErrorKind::MissingHeader(h) => write!(f, "missing `{h}` line"),
        }
    }
}

/// A parse failure with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A logical line with its comment stripped, keeping the original position.
pub(crate) struct Line<'a> {
    pub number: usize,
    pub key: &'a str,
    pub key_col: usize,
    pub body: &'a str,
    pub body_col: usize,
}

pub(crate) fn lines(text: &str) -> impl Iterator<Item = Result<Line<'_>, ParseError>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let number = i + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if content.trim().is_empty() {
            return None;
        }
        let lead = content.len() - content.trim_start().len();
        let Some(colon) = content.find(':') else {
            return Some(Err(ParseError {
                line: number,
                column: lead + 1,
                kind: ParseErrorKind::Syntax("expected `key: value`".into()),
            }));
        };
        let key = content[..colon].trim();
        let body = &content[colon + 1..];
        Some(Ok(Line {
            number,
            key,
            key_col: lead + 1,
            body,
            body_col: colon + 2,
        }))
    })
}

/// Parse a whitespace-separated identifier list (a `gens:` or `targets:` body).
pub(crate) fn parse_ident_list(line: &Line<'_>) -> Result<Vec<String>, ParseError> {
    let mut names: Vec<String> = Vec::new();
    let mut offset = 0;
    for tok in line.body.split_whitespace() {
        let start = line.body[offset..].find(tok).unwrap() + offset;
        offset = start + tok.len();
        let column = line.body_col + start;
        if !is_identifier(tok) {
            return Err(ParseError {
                line: line.number,
                column,
                kind: ParseErrorKind::InvalidIdentifier(tok.into()),
            });
        }
        if names.iter().any(|n| n == tok) {
            return Err(ParseError {
                line: line.number,
                column,
                kind: ParseErrorKind::DuplicateGenerator(tok.into()),
            });
        }
        names.push(tok.to_string());
    }
    Ok(names)
}

/// Recursive-descent parser for one word.
pub(crate) struct WordParser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    line: usize,
    col0: usize,
    names: &'a HashMap<&'a str, usize>,
}

impl<'a> WordParser<'a> {
    pub fn new(
        text: &'a str,
        line: usize,
        col0: usize,
        names: &'a HashMap<&'a str, usize>,
    ) -> Self {
        WordParser {
            src: text.as_bytes(),
            text,
            pos: 0,
            line,
            col0,
            names,
        }
    }

    fn err(&self, at: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column: self.col0 + at,
            kind,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(self.err(
                self.pos,
                ParseErrorKind::Syntax(format!("expected `{}`, found `{}`", c as char, x as char)),
            )),
            None => Err(self.err(
                self.pos,
                ParseErrorKind::Syntax(format!("expected `{}`, found end of line", c as char)),
            )),
        }
    }

    pub fn parse_complete(mut self) -> Result<Word, ParseError> {
        if self.peek().is_none() {
            return Err(self.err(self.pos, ParseErrorKind::Syntax("empty word".into())));
        }
        let w = self.word()?;
        if let Some(c) = self.peek() {
            let msg = if c.is_ascii_alphanumeric() || c == b'(' || c == b'[' {
                format!("unexpected `{}`; terms must be joined with `*`", c as char)
            } else {
                format!("unexpected `{}`", c as char)
            };
            return Err(self.err(self.pos, ParseErrorKind::Syntax(msg)));
        }
        Ok(w)
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let mut w = self.term()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let t = self.term()?;
            w = w.multiply(&t);
        }
        Ok(w)
    }

    fn term(&mut self) -> Result<Word, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let mut end = start;
            if end < self.src.len() && (self.src[end] == b'-' || self.src[end] == b'+') {
                end += 1;
            }
            while end < self.src.len() && self.src[end].is_ascii_digit() {
                end += 1;
            }
            // swallow the rest of an ill-formed exponent for the message
            let mut tail = end;
            while tail < self.src.len()
                && (self.src[tail].is_ascii_alphanumeric() || self.src[tail] == b'.')
            {
                tail += 1;
            }
            let tok = &self.text[start..tail.max(start)];
            if tail != end || end == start || !self.src[start..end].iter().any(u8::is_ascii_digit)
            {
                let shown = if tok.is_empty() {
                    self.text[start..].chars().next().map(String::from).unwrap_or_default()
                } else {
                    tok.to_string()
                };
                return Err(self.err(start, ParseErrorKind::NonIntegerExponent(shown)));
            }
            let k: i64 = tok
                .parse()
                .map_err(|_| self.err(start, ParseErrorKind::NonIntegerExponent(tok.into())))?;
            self.pos = end;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Word, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(b',')?;
                let v = self.word()?;
                self.expect(b']')?;
                Ok(u.commutator(&v))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Word::identity())
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let ident = &self.text[start..self.pos];
                match self.names.get(ident) {
                    Some(&g) => Ok(Word::new([Letter::pos(g)])),
                    None => Err(self.err(start, ParseErrorKind::UnknownIdentifier(ident.into()))),
                }
            }
            Some(c) => Err(self.err(
                self.pos,
                ParseErrorKind::Syntax(format!("unexpected `{}`", c as char)),
            )),
            None => Err(self.err(
                self.pos,
                ParseErrorKind::Syntax("unexpected end of line".into()),
            )),
        }
    }
}

/// Parse a single word over `names` (no line context).
pub fn parse_word<S: AsRef<str>>(text: &str, names: &[S]) -> Result<Word, ParseError> {
    let map: HashMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_ref(), i))
        .collect();
    WordParser::new(text, 1, 1, &map).parse_complete()
}
