//! `proxylang`: a small dynamic object language with JavaScript-style
//! proxies, built to compare ways of defining object identity in the
//! presence of proxies.
//!
//! Four equality designs are available through [`EqualityMode`]:
//! opaque reference identity, unconditional transparency, transparency with
//! the extra raw-identity operators `:==:`/`:===:`, and per-proxy choice via
//! an `isTransparent` handler trap.
//!
//! ```
//! use proxylang::{run_script, EqualityMode, RunConfig};
//!
//! let src = "var t = {}; var p = new Proxy(t, {isTransparent: function() { return true; }});
//!            print(p === t);";
//! let opaque = run_script(src, &RunConfig::new(EqualityMode::Opaque));
//! let trap = run_script(src, &RunConfig::new(EqualityMode::Trap));
//! assert_eq!(opaque.output, "false\n");
//! assert_eq!(trap.output, "true\n");
//! ```

pub mod collections;
pub mod corpus;
pub mod equality;
pub mod error;
pub mod frontend;
pub mod interp;
pub mod object;
pub mod prelude;
pub mod proxy;
pub mod value;

pub use equality::{raw_identical, EqualityMode};
pub use error::{Error, ErrorKind, LexError, ParseError, RuntimeError};
pub use interp::Interpreter;
pub use prelude::{Prelude, PRELUDE_SOURCE};
pub use proxy::{ProxySlots, TransparencyPolicy};
pub use value::{ObjectRef, Value};

/// Settings for one script execution.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunConfig {
    pub mode: EqualityMode,
    pub policy: TransparencyPolicy,
    pub prelude: Prelude,
}

impl RunConfig {
    pub fn new(mode: EqualityMode) -> Self {
        RunConfig {
            mode,
            ..Default::default()
        }
    }

    pub fn with_policy(mut self, policy: TransparencyPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_prelude(mut self, prelude: Prelude) -> Self {
        self.prelude = prelude;
        self
    }
}

/// Everything a script printed, and how it ended.
#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionResult {
    pub output: String,
    pub status: Result<(), Error>,
}

impl ExecutionResult {
    pub fn is_ok(&self) -> bool {
        self.status.is_ok()
    }

    pub fn error_kind(&self) -> Option<ErrorKind> {
        self.status.as_ref().err().and_then(Error::runtime_kind)
    }

    /// Printed output followed, for a failed run, by one line naming the
    /// error kind and line. This is what corpus `.expected` files hold.
    pub fn transcript(&self) -> String {
        let mut out = self.output.clone();
        if let Err(err) = &self.status {
            out.push_str(&error_summary(err));
            out.push('\n');
        }
        out
    }
}

/// Short, message-free description of an error: `error: <Kind> (line N)`.
pub fn error_summary(err: &Error) -> String {
    match err {
        Error::Lex(e) => format!("error: LexError (line {})", e.line),
        Error::Parse(e) => format!("error: ParseError (line {})", e.line),
        Error::Runtime(e) => match e.line {
            Some(line) => format!("error: {} (line {line})", e.kind),
            None => format!("error: {}", e.kind),
        },
    }
}

/// Runs the configured prelude and then `source` in a fresh instance.
pub fn run_script(source: &str, config: &RunConfig) -> ExecutionResult {
    let mut it = Interpreter::with_policy(config.mode, config.policy);
    let status = run_in(&mut it, source, &config.prelude);
    ExecutionResult {
        output: it.take_output(),
        status,
    }
}

/// Loads `prelude` into `it`, then runs `source`.
pub fn run_in(it: &mut Interpreter, source: &str, prelude: &Prelude) -> Result<(), Error> {
    if let Some(prelude) = prelude.source() {
        it.eval_library(prelude)?;
    }
    it.eval_source(source).map(|_| ())
}
