//! Tab-separated cell escaping shared by every TSV the toolkit reads or writes.
//!
//! Backslash, tab, newline and carriage return are written as `\\`, `\t`,
//! `\n` and `\r`, so a cell never contains a raw separator and any string
//! survives a write/read cycle unchanged.

use std::borrow::Cow;
use std::fmt;

use crate::error::{Error, Result};

pub fn escape(cell: &str) -> Cow<'_, str> {
    if !cell.contains(['\\', '\t', '\n', '\r']) {
        return Cow::Borrowed(cell);
    }
    let mut out = String::with_capacity(cell.len() + 8);
    for c in cell.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    Cow::Owned(out)
}

/// Inverse of [`escape`]. Unknown escape sequences and a trailing lone
/// backslash are kept literally.
pub fn unescape(cell: &str) -> Cow<'_, str> {
    if !cell.contains('\\') {
        return Cow::Borrowed(cell);
    }
    let mut out = String::with_capacity(cell.len());
    let mut chars = cell.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    Cow::Owned(out)
}

/// Joins already-unescaped cells into one TSV line (without the newline).
pub fn join_row<I, S>(cells: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut line = String::new();
    for (i, cell) in cells.into_iter().enumerate() {
        if i > 0 {
            line.push('\t');
        }
        line.push_str(&escape(cell.as_ref()));
    }
    line
}

/// Splits one TSV line into unescaped cells. A trailing `\r` is ignored.
pub fn split_row(line: &str) -> Vec<String> {
    let line = line.strip_suffix('\r').unwrap_or(line);
    line.split('\t').map(|c| unescape(c).into_owned()).collect()
}

/// A column selected either by zero-based position or by header name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Index(usize),
    Name(String),
}

impl ColumnRef {
    /// Resolves against an optional header row. Names need a header.
    pub fn resolve(&self, header: Option<&[String]>, width: usize) -> Result<usize> {
        match self {
            ColumnRef::Index(i) if *i < width => Ok(*i),
            ColumnRef::Index(i) => Err(Error::input(format!(
                "column {i} out of range; available columns: {}",
                describe_columns(header, width)
            ))),
            ColumnRef::Name(name) => header
                .and_then(|h| h.iter().position(|c| c == name))
                .ok_or_else(|| {
                    Error::input(format!(
                        "no column named {name:?}; available columns: {}",
                        describe_columns(header, width)
                    ))
                }),
        }
    }
}

fn describe_columns(header: Option<&[String]>, width: usize) -> String {
    match header {
        Some(h) => h
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{i}:{c}"))
            .collect::<Vec<_>>()
            .join(", "),
        None => format!("0..{width}"),
    }
}

impl std::str::FromStr for ColumnRef {
    type Err = std::convert::Infallible;

    /// All-digit strings are indexes, anything else is a header name.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(s.to_string()),
        })
    }
}

impl fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnRef::Index(i) => write!(f, "{i}"),
            ColumnRef::Name(n) => f.write_str(n),
        }
    }
}
