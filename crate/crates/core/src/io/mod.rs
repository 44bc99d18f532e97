//! Line-oriented text formats for elections, bipartite graphs, X3C instances
//! and turnout tables.

mod election;
mod sources;

use thiserror::Error;

pub use election::{parse_election, serialize_election};
pub use sources::{parse_graph, parse_turnout_table, parse_x3c, serialize_graph, serialize_x3c};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

/// Non-blank lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

/// `key = value`, with the key lowercased.
fn key_value(line: &str) -> Option<(String, &str)> {
    let (k, v) = line.split_once('=')?;
    Some((k.trim().to_ascii_lowercase(), v.trim()))
}

fn is_token(s: &str) -> bool {
    crate::election::is_token(s)
}

/// Comma-separated tokens; empty input gives an empty list.
fn token_list(line: usize, s: &str) -> Result<Vec<String>, ParseError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            if is_token(t) {
                Ok(t.to_string())
            } else {
                err(line, format!("`{t}` is not a valid name"))
            }
        })
        .collect()
}
