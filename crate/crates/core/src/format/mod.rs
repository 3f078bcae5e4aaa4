//! Text formats for machines and instances.
//!
//! Both formats are line-oriented: each line holds one directive, blank
//! lines are ignored and a line whose first non-blank character is `#` is a
//! comment. Tokens are separated by whitespace; `{`, `}`, `;` and `|` are
//! punctuation even when attached to a neighbouring token, and `~` denotes
//! the empty word.

mod hdt0l_file;
mod sst_file;

pub use hdt0l_file::{parse_hdt0l, print_hdt0l};
pub use sst_file::{parse_sst, print_sst};

use crate::error::Error;

const PUNCTUATION: [char; 4] = ['{', '}', ';', '|'];
const RESERVED: [&str; 4] = ["~", "->", ":=", "="];

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Tok {
    pub text: String,
    pub line: usize,
    pub col: usize,
}

/// One directive: its tokens and the position just past its end.
#[derive(Clone, Debug)]
pub(crate) struct Line {
    pub toks: Vec<Tok>,
    pub end: (usize, usize),
}

/// Whether a token can be written in a file.
pub fn is_printable_token(token: &str) -> bool {
    crate::words::is_valid_token(token)
        && !token.contains(PUNCTUATION)
        && !RESERVED.contains(&token)
}

pub(crate) fn lex(text: &str) -> Vec<Line> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim_start().starts_with('#') || raw.trim().is_empty() {
            continue;
        }
        let mut toks = Vec::new();
        let mut current: Option<Tok> = None;
        let mut col = 0;
        for c in raw.chars() {
            col += 1;
            if c.is_whitespace() || PUNCTUATION.contains(&c) {
                if let Some(t) = current.take() {
                    toks.push(t);
                }
                if !c.is_whitespace() {
                    toks.push(Tok {
                        text: c.to_string(),
                        line,
                        col,
                    });
                }
                continue;
            }
            match &mut current {
                Some(t) => t.text.push(c),
                None => {
                    current = Some(Tok {
                        text: c.to_string(),
                        line,
                        col,
                    })
                }
            }
        }
        if let Some(t) = current.take() {
            toks.push(t);
        }
        lines.push(Line {
            toks,
            end: (line, col + 1),
        });
    }
    lines
}

pub(crate) fn error_at(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub(crate) fn tok_error(tok: &Tok, message: impl Into<String>) -> Error {
    error_at(tok.line, tok.col, message)
}

/// Sequential reader over the tokens of one directive.
pub(crate) struct Cursor<'a> {
    toks: &'a [Tok],
    pos: usize,
    end: (usize, usize),
}

impl<'a> Cursor<'a> {
    pub fn new(line: &'a Line) -> Self {
        Cursor {
            toks: &line.toks,
            pos: 0,
            end: line.end,
        }
    }

    pub fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos)
    }

    pub fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn error_here(&self, message: impl Into<String>) -> Error {
        match self.peek() {
            Some(t) => tok_error(t, message),
            None => error_at(self.end.0, self.end.1, message),
        }
    }

    pub fn expect(&mut self, text: &str) -> Result<&'a Tok, Error> {
        match self.peek() {
            Some(t) if t.text == text => {
                self.pos += 1;
                Ok(t)
            }
            Some(t) => Err(tok_error(
                t,
                format!("expected `{text}`, found `{}`", t.text),
            )),
            None => Err(self.error_here(format!("expected `{text}`"))),
        }
    }

    /// A token usable as a name.
    pub fn name(&mut self, what: &str) -> Result<&'a Tok, Error> {
        match self.peek() {
            Some(t) if is_printable_token(&t.text) => {
                self.pos += 1;
                Ok(t)
            }
            Some(t) => Err(tok_error(t, format!("expected {what}, found `{}`", t.text))),
            None => Err(self.error_here(format!("expected {what}"))),
        }
    }

    pub fn finish(&self) -> Result<(), Error> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(tok_error(t, format!("unexpected `{}`", t.text))),
        }
    }

    /// Tokens up to (not including) the first one in `stops`, or the end.
    pub fn until(&mut self, stops: &[&str]) -> &'a [Tok] {
        let start = self.pos;
        while let Some(t) = self.peek() {
            if stops.contains(&t.text.as_str()) {
                break;
            }
            self.pos += 1;
        }
        &self.toks[start..self.pos]
    }
}

/// Distinct names from a list of tokens.
pub(crate) fn name_list(toks: &[Tok], what: &str) -> Result<Vec<String>, Error> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(toks.len());
    for t in toks {
        if !is_printable_token(&t.text) {
            return Err(tok_error(
                t,
                format!("`{}` cannot be used as {what}", t.text),
            ));
        }
        if !seen.insert(t.text.as_str()) {
            return Err(tok_error(t, format!("duplicate {what} `{}`", t.text)));
        }
        out.push(t.text.clone());
    }
    Ok(out)
}
