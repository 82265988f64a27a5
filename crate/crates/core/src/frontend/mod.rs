//! Lexing, parsing and pretty-printing of `.plx` source.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod pretty;

pub use ast::Program;
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;
pub use pretty::pretty_print;

use crate::error::Error;

/// Tokenizes and parses `source` in one step.
pub fn parse_source(source: &str) -> Result<Program, Error> {
    let tokens = tokenize(source)?;
    Ok(parse(&tokens)?)
}

/// Like [`parse_source`], but every position in the result has line 0, so
/// runtime errors raised inside library code are reported at the caller's
/// line instead. Syntax errors still carry real lines.
pub fn parse_library(source: &str) -> Result<Program, Error> {
    let tokens = tokenize(source)?;
    let unlined: Vec<Token> = tokens
        .iter()
        .cloned()
        .map(|t| Token { line: 0, ..t })
        .collect();
    match parse(&unlined) {
        Ok(program) => Ok(program),
        Err(_) => Err(parse(&tokens)
            .expect_err("parse depends only on token kinds")
            .into()),
    }
}
