use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

use crate::geom::{Line, Point};

/// A parse failure, located by 1-based input line and offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub token: String,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, token: &str, message: &str) -> Self {
        ParseError {
            line,
            token: token.to_string(),
            message: message.to_string(),
        }
    }

    pub(crate) fn at_line(mut self, line: usize) -> Self {
        self.line = line;
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: {} (token `{}`)", self.line, self.message, self.token)
        } else {
            write!(f, "{} (token `{}`)", self.message, self.token)
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("a line needs two distinct points")]
    IdenticalPoints,
    #[error("degenerate line: a and b are both zero")]
    DegenerateLine,
    #[error("operation undefined for vertical line {0}")]
    VerticalLine(Line),
    #[error("malformed hull: {0}")]
    MalformedHull(String),
    #[error("duplicate point {0}")]
    DuplicatePoint(Box<Point>),
    #[error("duplicate line {0}")]
    DuplicateLine(Line),
    #[error("coefficients must sum to zero, got {0}")]
    CoefficientSum(i64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("n = {n} is too small: {reason}")]
    NTooSmall { n: u64, reason: String },
    #[error("lines {} and {} cross the reference line at the same point", .0[0], .0[1])]
    DuplicateIntercept(Box<[Line; 2]>),
    #[error("point sets are not separable by a line of the requested slope sign; witness {}", fmt_pairs(.witness))]
    NotSeparable { witness: Vec<(Point, Point)> },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
}

fn fmt_pairs(pairs: &[(Point, Point)]) -> String {
    pairs
        .iter()
        .map(|(a, b)| format!("above {a} / below {b}"))
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
