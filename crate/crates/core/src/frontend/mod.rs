//! Lexer, parser and scope resolver for the source language.

pub mod ast;
mod lexer;
mod parser;
mod pretty;
mod resolve;

#[cfg(test)]
mod tests;

use thiserror::Error;

pub use ast::*;
pub use parser::{parse, parse_expr};
pub use pretty::{pretty_expr, pretty_program};
pub use resolve::{resolve, BinderInfo, BinderKind, Resolved, BUILTIN_READ, BUILTIN_WRITE};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            line: pos.line,
            col: pos.col,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("{pos}: unbound identifier `{name}`")]
    Unbound { name: String, pos: Pos },
    #[error("{pos}: `{name}` is already declared in this scope")]
    Duplicate { name: String, pos: Pos },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("resolution error at {0}")]
    Resolve(#[from] ResolveError),
}

/// Parses and resolves a source text.
pub fn load(src: &str) -> Result<Resolved, FrontendError> {
    Ok(resolve(parse(src)?)?)
}
