//! The script library loaded ahead of user code.

/// Source of the embedded prelude.
pub const PRELUDE_SOURCE: &str = include_str!("prelude.plx");

/// Which prelude, if any, to load before a script.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum Prelude {
    #[default]
    Embedded,
    None,
    Source(String),
}

impl Prelude {
    pub fn source(&self) -> Option<&str> {
        match self {
            Prelude::Embedded => Some(PRELUDE_SOURCE),
            Prelude::None => None,
            Prelude::Source(s) => Some(s),
        }
    }
}
