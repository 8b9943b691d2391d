//! Line-oriented ASCII formats for programs, models, machines, circuits,
//! formulas and QBFs, with spanned parse errors and inverse serializers.

mod circuit;
mod lex;
mod machine;
mod mcl_text;
mod model_text;
mod program_text;
mod qbf_text;
mod schema_text;

pub use circuit::{parse_circuit, serialize_circuit};
pub use machine::{parse_tm, serialize_tm};
pub use mcl_text::{parse_mcl, serialize_mcl};
pub use model_text::{parse_model, serialize_model};
pub use program_text::{parse_program, serialize_program};
pub use qbf_text::{parse_qbf, serialize_qbf};
pub use schema_text::serialize_schema;

use std::fmt;

/// 1-based location of a token or error inside a source file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub col_start: usize,
    pub col_end: usize,
}

impl SourceSpan {
    pub fn new(file: &str, line: usize, col_start: usize, col_end: usize) -> SourceSpan {
        SourceSpan {
            file: file.to_string(),
            line,
            col_start,
            col_end,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}-{}", self.file, self.line, self.col_start, self.col_end)
    }
}

/// A parse or validation failure, always carrying a span.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    pub fn new(span: SourceSpan, message: impl Into<String>) -> ParseError {
        ParseError {
            span,
            message: message.into(),
        }
    }
}

pub type ParseResult<T> = Result<T, ParseError>;

/// Identifiers: `[A-Za-z_][A-Za-z0-9_]*`. `T` and `F` are the constants.
pub fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
