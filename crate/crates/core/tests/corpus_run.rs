use std::path::PathBuf;

use proxylang::corpus::run_corpus;
use proxylang::{EqualityMode, Prelude};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

#[test]
fn corpus_matches_expected_transcripts() {
    let report = run_corpus(&corpus_dir(), EqualityMode::Opaque, &Prelude::Embedded).unwrap();
    assert!(
        report.outcomes.len() >= 20,
        "corpus shrank to {}",
        report.outcomes.len()
    );
    let mut failures = String::new();
    for o in report.outcomes.iter().filter(|o| !o.passed()) {
        failures.push_str(&format!(
            "--- {} ({})\nexpected:\n{}actual:\n{}\n",
            o.path.display(),
            o.mode.name(),
            o.expected,
            o.actual
        ));
    }
    assert!(report.all_passed(), "{}\n{failures}", report.summary());
}

#[test]
fn unpinned_scripts_agree_across_modes() {
    // Scripts without a mode directive do not depend on the default mode.
    for mode in EqualityMode::ALL {
        let report = run_corpus(&corpus_dir(), mode, &Prelude::Embedded).unwrap();
        assert!(report.all_passed(), "{}: {}", mode.name(), report.summary());
    }
}
