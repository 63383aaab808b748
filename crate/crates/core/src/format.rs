//! Plain-text file formats shared by every module.
//!
//! All formats are line oriented. `#` starts a comment that runs to the end
//! of the line and blank lines are ignored. Points are written `x y`, each
//! coordinate an integer or `p/q`; lines are written as the canonical
//! integer triple `a b c` of `a·x + b·y = c`.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, ParseError, Result};

pub(crate) struct Cursor<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let body = l.split('#').next().unwrap_or("").trim();
                (!body.is_empty()).then_some((i + 1, body))
            })
            .collect();
        Cursor { lines, pos: 0 }
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(1, |(n, _)| *n)
    }

    pub(crate) fn is_done(&self) -> bool {
        self.pos >= self.lines.len()
    }

    pub(crate) fn next_raw(&mut self) -> Result<(usize, &'a str), ParseError> {
        let item = self
            .lines
            .get(self.pos)
            .copied()
            .ok_or_else(|| ParseError::new(self.last_line(), "", "unexpected end of input"))?;
        self.pos += 1;
        Ok(item)
    }

    pub(crate) fn next_item<T: FromStr<Err = ParseError>>(&mut self) -> Result<(usize, T), ParseError> {
        let (n, body) = self.next_raw()?;
        body.parse().map(|v| (n, v)).map_err(|e: ParseError| e.at_line(n))
    }

    /// Reads a `name <count>` header.
    pub(crate) fn header(&mut self, name: &str) -> Result<usize, ParseError> {
        let (n, body) = self.next_raw()?;
        let mut toks = body.split_whitespace();
        match (toks.next(), toks.next(), toks.next()) {
            (Some(h), Some(count), None) if h == name => count
                .parse()
                .map_err(|_| ParseError::new(n, count, "section size is not a nonnegative integer")),
            _ => Err(ParseError::new(n, body, &format!("expected `{name} <count>` header"))),
        }
    }

    pub(crate) fn items<T: FromStr<Err = ParseError>>(&mut self, count: usize) -> Result<Vec<(usize, T)>, ParseError> {
        (0..count).map(|_| self.next_item()).collect()
    }

    pub(crate) fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.lines.get(self.pos) {
            None => Ok(()),
            Some((n, body)) => Err(ParseError::new(*n, body, "trailing content")),
        }
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses a set file: one positive integer per line, strictly increasing.
pub fn parse_int_set(text: &str) -> Result<Vec<u64>> {
    let mut cur = Cursor::new(text);
    let mut out: Vec<u64> = Vec::new();
    while !cur.is_done() {
        let (n, body) = cur.next_raw()?;
        let v: u64 = body
            .parse()
            .map_err(|_| ParseError::new(n, body, "expected a positive integer"))?;
        if v == 0 {
            return Err(ParseError::new(n, body, "expected a positive integer").into());
        }
        if out.last().is_some_and(|&last| last >= v) {
            return Err(ParseError::new(n, body, "set elements must be strictly increasing").into());
        }
        out.push(v);
    }
    Ok(out)
}

pub fn format_int_set(set: &[u64]) -> String {
    let mut s = String::new();
    for v in set {
        s.push_str(&v.to_string());
        s.push('\n');
    }
    s
}

pub fn read_int_set(path: &Path) -> Result<Vec<u64>> {
    parse_int_set(&read_text(path)?)
}

pub fn write_int_set(set: &[u64], path: &Path) -> Result<()> {
    write_text(path, &format_int_set(set))
}
