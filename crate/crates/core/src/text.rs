//! Shared helpers for the plain-text file formats.

use thiserror::Error;

/// A parse failure located at a 1-based line and column of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

/// One meaningful input line: comments stripped, blank lines dropped.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Line<'a> {
    pub number: usize,
    pub text: &'a str,
}

impl<'a> Line<'a> {
    /// Whitespace-separated tokens with their 1-based starting columns.
    pub fn tokens(&self) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, ch) in self.text.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push((s + 1, &self.text[s..i]));
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            out.push((s + 1, &self.text[s..]));
        }
        out
    }

    pub fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::new(self.number, column, message)
    }

    /// Parses every token as an unsigned integer, requiring exactly `count` of them.
    pub fn integers(&self, count: usize, what: &str) -> Result<Vec<usize>, ParseError> {
        let tokens = self.tokens();
        if tokens.len() != count {
            let column = tokens.get(count).map_or(1, |t| t.0);
            return Err(self.error(
                column,
                format!(
                    "expected {count} integer(s) for {what}, found {}",
                    tokens.len()
                ),
            ));
        }
        tokens
            .into_iter()
            .map(|(col, tok)| {
                tok.parse::<usize>()
                    .map_err(|_| self.error(col, format!("invalid integer '{tok}' in {what}")))
            })
            .collect()
    }
}

/// Splits `input` into meaningful lines. Everything after a `#` is a comment.
pub(crate) fn meaningful_lines(input: &str) -> Vec<Line<'_>> {
    input
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let text = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let text = text.trim_end();
            if text.trim().is_empty() {
                None
            } else {
                Some(Line {
                    number: i + 1,
                    text,
                })
            }
        })
        .collect()
}

/// Error for input that ended before the expected content.
pub(crate) fn unexpected_end(input: &str, what: &str) -> ParseError {
    let line = input.lines().count().max(1);
    ParseError::new(line, 1, format!("unexpected end of input: expected {what}"))
}

/// Returns the first meaningful line or an end-of-input error.
pub(crate) fn first_line<'a>(
    lines: &[Line<'a>],
    input: &str,
    what: &str,
) -> Result<Line<'a>, ParseError> {
    lines
        .first()
        .copied()
        .ok_or_else(|| unexpected_end(input, what))
}
