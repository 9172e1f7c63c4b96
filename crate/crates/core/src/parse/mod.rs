//! Parsers for expressions, metric files and curvature identities.

mod expr;
mod identity;
mod lexer;
mod metric;

pub use expr::{parse_expression, parse_expression_at};
pub use identity::{parse_identity, IdentityAst, IdentityTerm, Scalar, TensorAtom, TensorName};
pub use lexer::{Lexer, Token, TokenKind};
pub use metric::{parse_metric_file, MetricSpec};

use std::fmt;

/// A 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("exponent must be an integer")]
    NonIntegerExponent,
    #[error("{0}")]
    Invalid(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("index {index} out of range 1..{dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("component g[{0}][{1}] assigned twice")]
    DuplicateAssignment(usize, usize),
    #[error("g[{0}][{1}] and g[{1}][{0}] are assigned different values")]
    AsymmetricAssignment(usize, usize),
    #[error("unknown tensor `{0}`")]
    UnknownTensor(String),
    #[error("valence mismatch: expected a (0,{expected}) tensor, found (0,{found})")]
    ValenceMismatch { expected: usize, found: usize },
    #[error("metric is degenerate (determinant is zero)")]
    DegenerateMetric,
    #[error("unknown scalar `{0}` clashes with a declared symbol")]
    UnknownClashesWithSymbol(String),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{position}: {kind}")]
pub struct ParseError {
    pub position: Position,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(position: Position, kind: ParseErrorKind) -> Self {
        ParseError { position, kind }
    }
}
