//! Parser for the supported openCypher fragment.
//!
//! A query is a single linear `MATCH` pattern with outgoing relationships,
//! an optional conjunction of comparisons and a `RETURN` of variables or
//! `variable.property` items. Everything else is rejected with
//! [`QueryError::Unsupported`] naming the construct.

pub mod ast;
mod lexer;
mod parser;

use thiserror::Error;

pub use ast::*;
pub use parser::parse;

/// A query diagnostic. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: unsupported feature: {construct}")]
    Unsupported {
        line: usize,
        column: usize,
        construct: String,
    },
    #[error("{line}:{column}: variable `{name}` is not bound by the pattern")]
    UnboundVariable {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("{line}:{column}: variable `{name}` is bound more than once")]
    DuplicateVariable {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("{line}:{column}: {message}")]
    InvalidReference {
        line: usize,
        column: usize,
        message: String,
    },
}

impl QueryError {
    /// Syntax errors are malformed input; everything else is a well-formed
    /// query the engine refuses.
    pub fn is_syntax(&self) -> bool {
        matches!(self, QueryError::Syntax { .. })
    }

    pub fn position(&self) -> (usize, usize) {
        match self {
            QueryError::Syntax { line, column, .. }
            | QueryError::Unsupported { line, column, .. }
            | QueryError::UnboundVariable { line, column, .. }
            | QueryError::DuplicateVariable { line, column, .. }
            | QueryError::InvalidReference { line, column, .. } => (*line, *column),
        }
    }
}
