use std::fmt;

use thiserror::Error;

/// Failure while turning source text into tokens.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("LexError at {line}:{column}: {message}")]
pub struct LexError {
    pub message: String,
    pub line: u32,
    pub column: u32,
}

/// Failure while turning tokens into a [`Program`](crate::frontend::ast::Program).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ParseError at {line}:{column}: {message}")]
pub struct ParseError {
    pub message: String,
    pub line: u32,
    pub column: u32,
}

/// The kinds of error a running script can abort with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    TypeError,
    ReferenceError,
    RevokedProxyError,
    ContractViolation,
    StackOverflow,
}

impl ErrorKind {
    pub fn name(self) -> &'static str {
        match self {
            ErrorKind::TypeError => "TypeError",
            ErrorKind::ReferenceError => "ReferenceError",
            ErrorKind::RevokedProxyError => "RevokedProxyError",
            ErrorKind::ContractViolation => "ContractViolation",
            ErrorKind::StackOverflow => "StackOverflow",
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An error raised while evaluating a script.
///
/// `line` is filled in by the evaluator with the innermost source expression
/// that was executing when the error surfaced. Errors raised through the
/// embedding API outside of any script code keep `line == None`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct RuntimeError {
    pub kind: ErrorKind,
    pub message: String,
    pub line: Option<u32>,
}

impl RuntimeError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        RuntimeError {
            kind,
            message: message.into(),
            line: None,
        }
    }

    pub fn type_error(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::TypeError, message)
    }

    pub fn reference_error(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::ReferenceError, message)
    }

    pub fn revoked(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::RevokedProxyError, message)
    }

    /// Attaches a source line unless one is already recorded.
    /// Records `line` unless a line is already known. Line 0 marks library
    /// code and is skipped.
    pub fn at_line(mut self, line: u32) -> Self {
        if self.line.is_none() && line != 0 {
            self.line = Some(line);
        }
        self
    }
}

impl fmt::Display for RuntimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "{} at line {}: {}", self.kind, line, self.message),
            None => write!(f, "{}: {}", self.kind, self.message),
        }
    }
}

/// Any failure produced while loading or running a script.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
}

impl Error {
    pub fn runtime_kind(&self) -> Option<ErrorKind> {
        match self {
            Error::Runtime(e) => Some(e.kind),
            _ => None,
        }
    }

    /// Lex and parse errors are reported as usage-level failures by the CLI.
    pub fn is_static(&self) -> bool {
        matches!(self, Error::Lex(_) | Error::Parse(_))
    }
}

pub type RtResult<T> = Result<T, RuntimeError>;
