//! Conformance corpus: `.plx` scripts paired with `.expected` transcripts.
//!
//! A script may pin its equality mode with a first line of the form
//! `// mode: trap`; that mode wins over the one requested by the caller.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::equality::EqualityMode;
use crate::prelude::Prelude;
use crate::{run_script, RunConfig};

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub path: PathBuf,
    pub source: String,
    pub expected: String,
}

#[derive(Debug, Clone)]
pub struct CorpusOutcome {
    pub path: PathBuf,
    pub mode: EqualityMode,
    pub expected: String,
    pub actual: String,
}

impl CorpusOutcome {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, Default)]
pub struct CorpusReport {
    pub outcomes: Vec<CorpusOutcome>,
}

impl CorpusReport {
    pub fn passed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.passed()).count()
    }

    pub fn failed(&self) -> usize {
        self.outcomes.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn summary(&self) -> String {
        format!("{} passed, {} failed", self.passed(), self.failed())
    }
}

pub fn normalize_newlines(s: &str) -> String {
    s.replace("\r\n", "\n")
}

/// Reads the `// mode: <name>` directive from the first line, if present.
/// A directive naming an unknown mode is an error.
pub fn mode_directive(source: &str) -> Result<Option<EqualityMode>, String> {
    let first = source.lines().next().unwrap_or_default().trim();
    let Some(rest) = first.strip_prefix("//") else {
        return Ok(None);
    };
    let Some(name) = rest.trim().strip_prefix("mode:") else {
        return Ok(None);
    };
    name.trim().parse().map(Some).map_err(|e| format!("{e}"))
}

/// Every `*.plx` in `dir` (not recursive) that has a sibling `*.expected`,
/// sorted by path.
pub fn discover(dir: &Path) -> io::Result<Vec<CorpusEntry>> {
    let mut entries = Vec::new();
    for item in fs::read_dir(dir)? {
        let path = item?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("plx") {
            continue;
        }
        let expected_path = path.with_extension("expected");
        if !expected_path.is_file() {
            continue;
        }
        entries.push(CorpusEntry {
            source: fs::read_to_string(&path)?,
            expected: normalize_newlines(&fs::read_to_string(&expected_path)?),
            path,
        });
    }
    entries.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(entries)
}

/// Runs one entry in its pinned mode, or `default_mode` if it pins none.
pub fn run_entry(
    entry: &CorpusEntry,
    default_mode: EqualityMode,
    prelude: &Prelude,
) -> CorpusOutcome {
    let (mode, actual) = match mode_directive(&entry.source) {
        Ok(pinned) => {
            let mode = pinned.unwrap_or(default_mode);
            let config = RunConfig::new(mode).with_prelude(prelude.clone());
            (mode, run_script(&entry.source, &config).transcript())
        }
        Err(msg) => (default_mode, format!("error: bad mode directive: {msg}\n")),
    };
    CorpusOutcome {
        path: entry.path.clone(),
        mode,
        expected: entry.expected.clone(),
        actual: normalize_newlines(&actual),
    }
}

/// Runs every entry in `dir` in parallel, one interpreter per entry.
/// Outcomes are reported in path order.
pub fn run_corpus(
    dir: &Path,
    default_mode: EqualityMode,
    prelude: &Prelude,
) -> io::Result<CorpusReport> {
    let entries = discover(dir)?;
    let outcomes = entries
        .par_iter()
        .map(|e| run_entry(e, default_mode, prelude))
        .collect();
    Ok(CorpusReport { outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directives() {
        assert_eq!(
            mode_directive("// mode: trap\nprint(1);"),
            Ok(Some(EqualityMode::Trap))
        );
        assert_eq!(
            mode_directive("//mode:operators"),
            Ok(Some(EqualityMode::Operators))
        );
        assert_eq!(mode_directive("print(1);\n// mode: trap"), Ok(None));
        assert_eq!(mode_directive("// just a comment"), Ok(None));
        assert!(mode_directive("// mode: fuzzy").is_err());
    }

    #[test]
    fn discovers_pairs_only() {
        let dir = std::env::temp_dir().join(format!("proxylang-corpus-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join("b.plx"), "print(2);").unwrap();
        fs::write(dir.join("b.expected"), "2\r\n").unwrap();
        fs::write(dir.join("a.plx"), "// mode: trap\nprint(1);").unwrap();
        fs::write(dir.join("a.expected"), "1\n").unwrap();
        fs::write(dir.join("lonely.plx"), "print(3);").unwrap();
        let report = run_corpus(&dir, EqualityMode::Opaque, &Prelude::None).unwrap();
        let names: Vec<_> = report
            .outcomes
            .iter()
            .map(|o| o.path.file_name().unwrap().to_str().unwrap().to_string())
            .collect();
        assert_eq!(names, ["a.plx", "b.plx"]);
        assert_eq!(report.outcomes[0].mode, EqualityMode::Trap);
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.summary(), "2 passed, 0 failed");
        fs::remove_dir_all(&dir).unwrap();
    }
}
