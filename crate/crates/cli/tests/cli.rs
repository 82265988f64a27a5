use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn proxylang(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_proxylang"))
        .args(args)
        .output()
        .unwrap()
}

fn script(dir: &Path, name: &str, src: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, src).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Exit code 0 exactly when nothing was written to stderr.
fn assert_status(o: &Output, code: i32) {
    assert_eq!(
        o.status.code(),
        Some(code),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(o.stderr.is_empty(), code == 0);
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/corpus")
}

#[test]
fn run_prints_output() {
    let dir = tempfile::tempdir().unwrap();
    let hello = script(dir.path(), "hello.plx", "print(\"hi\");");
    let o = proxylang(&["run", &hello]);
    assert_status(&o, 0);
    assert_eq!(stdout(&o), "hi\n");
}

#[test]
fn equality_mode_flag_selects_the_design() {
    let dir = tempfile::tempdir().unwrap();
    let src = "var t = {}; var p = new Proxy(t, {isTransparent: function() { return true; }});\n\
               print(p === t, p :===: t);";
    let path = script(dir.path(), "mode.plx", src);
    for (mode, want) in [
        ("opaque", "false false\n"),
        ("transparent", "true false\n"),
        ("operators", "true false\n"),
        ("trap", "true false\n"),
    ] {
        let o = proxylang(&["run", &path, &format!("--equality-mode={mode}")]);
        assert_status(&o, 0);
        assert_eq!(stdout(&o), want, "{mode}");
    }
    let o = proxylang(&["run", &path]);
    assert_eq!(stdout(&o), "false false\n");
}

#[test]
fn unknown_mode_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = script(dir.path(), "x.plx", "print(1);");
    for bad in ["fuzzy", "Trap", ""] {
        let o = proxylang(&["run", &path, &format!("--equality-mode={bad}")]);
        assert_status(&o, 2);
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn runtime_and_static_errors() {
    let dir = tempfile::tempdir().unwrap();
    let runtime = script(dir.path(), "rt.plx", "print(1);\nmissing();");
    let o = proxylang(&["run", &runtime]);
    assert_status(&o, 1);
    assert_eq!(stdout(&o), "1\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("ReferenceError at line 2"));

    let parse = script(dir.path(), "parse.plx", "print(1) print(2);");
    assert_status(&proxylang(&["run", &parse]), 2);
    let lex = script(dir.path(), "lex.plx", "print(\"open);");
    assert_status(&proxylang(&["run", &lex]), 2);
    assert_status(&proxylang(&["run", "/no/such/file.plx"]), 2);
    assert_status(&proxylang(&["run"]), 2);
}

#[test]
fn prelude_flags() {
    let dir = tempfile::tempdir().unwrap();
    let uses_prelude = script(
        dir.path(),
        "p.plx",
        "print(revocable({}).proxy === undefined);",
    );
    assert_status(&proxylang(&["run", &uses_prelude]), 0);
    assert_status(&proxylang(&["run", &uses_prelude, "--no-prelude"]), 1);

    let custom = script(dir.path(), "lib.plx", "function twice(x) { return x * 2; }");
    let user = script(dir.path(), "u.plx", "print(twice(21));");
    let o = proxylang(&["run", &user, "--prelude", &custom]);
    assert_status(&o, 0);
    assert_eq!(stdout(&o), "42\n");
    assert_status(
        &proxylang(&["run", &user, "--prelude", &custom, "--no-prelude"]),
        2,
    );
}

#[test]
fn bundled_corpus_passes_in_every_mode() {
    let dir = corpus_dir();
    for mode in ["opaque", "transparent", "operators", "trap"] {
        let o = proxylang(&["corpus", dir.to_str().unwrap(), "--equality-mode", mode]);
        assert_status(&o, 0);
        let summary = stdout(&o);
        assert!(summary.ends_with(" passed, 0 failed\n"), "{summary}");
    }
}

#[test]
fn corpus_reports_failures() {
    let dir = tempfile::tempdir().unwrap();
    script(dir.path(), "good.plx", "print(1);");
    script(dir.path(), "good.expected", "1\r\n");
    script(dir.path(), "bad.plx", "// mode: trap\nprint(2);");
    script(dir.path(), "bad.expected", "3\n");
    script(dir.path(), "orphan.plx", "print(4);");
    let o = proxylang(&["corpus", dir.path().to_str().unwrap()]);
    assert_status(&o, 1);
    assert_eq!(stdout(&o), "1 passed, 1 failed\n");
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("bad.plx") && err.contains("mode trap"),
        "{err}"
    );
}

#[test]
fn repl_evaluates_line_by_line() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_proxylang"))
        .args(["repl", "--equality-mode=trap"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"var t = {};\nvar p = new Proxy(t, {\n  isTransparent: function() { return true; }\n});\np === t\nprint(\"x\");\nnope();\n1 + 1;\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "true\nx\nundefined\n2\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("ReferenceError"));
}
