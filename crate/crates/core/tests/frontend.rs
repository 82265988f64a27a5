use std::fs;
use std::path::PathBuf;

use proptest::prelude::*;
use proxylang::frontend::{parse, parse_source, pretty_print, tokenize};
use proxylang::{Error, PRELUDE_SOURCE};

fn corpus_sources() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut out: Vec<(String, String)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "plx"))
        .map(|p| (p.display().to_string(), fs::read_to_string(&p).unwrap()))
        .collect();
    out.push(("prelude".into(), PRELUDE_SOURCE.to_string()));
    out
}

fn assert_round_trip(name: &str, src: &str) {
    let first = parse_source(src).unwrap_or_else(|e| panic!("{name}: {e}"));
    let printed = pretty_print(&first);
    let second =
        parse_source(&printed).unwrap_or_else(|e| panic!("{name}: reparse failed: {e}\n{printed}"));
    assert_eq!(first, second, "{name}\n{printed}");
    assert_eq!(
        pretty_print(&second),
        printed,
        "{name}: printing is not stable"
    );
}

#[test]
fn corpus_and_prelude_round_trip() {
    for (name, src) in corpus_sources() {
        if name.ends_with("errors_parse.plx") {
            assert!(matches!(parse_source(&src), Err(Error::Parse(_))));
            continue;
        }
        assert_round_trip(&name, &src);
    }
}

#[test]
fn mixed_equality_operators_need_parentheses() {
    for (a, b) in [
        ("==", ":==:"),
        ("===", "!=="),
        (":===:", "=="),
        ("!=", ":==:"),
    ] {
        let err = parse_source(&format!("x {a} y {b} z;")).unwrap_err();
        assert!(matches!(err, Error::Parse(_)), "{a} {b}");
        parse_source(&format!("(x {a} y) {b} z;")).unwrap();
    }
    parse_source("x == y == z;").unwrap();
}

fn ident() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "obj", "p", "t", "x1"]).prop_map(str::to_string)
}

fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        ident(),
        (0u32..1000).prop_map(|n| n.to_string()),
        (0u32..100, 1u32..100).prop_map(|(a, b)| format!("{a}.{b}")),
        "[a-z ]{0,6}".prop_map(|s| format!("\"{s}\"")),
        prop::sample::select(vec!["true", "false", "null", "undefined", "this"])
            .prop_map(str::to_string),
    ];
    leaf.prop_recursive(5, 48, 4, |inner| {
        let op = prop::sample::select(vec![
            "+", "-", "*", "/", "<", "<=", ">", ">=", "==", "!=", "===", "!==", ":==:", ":===:",
            "&&", "||",
        ]);
        prop_oneof![
            (inner.clone(), op, inner.clone()).prop_map(|(l, o, r)| format!("({l} {o} {r})")),
            (prop::sample::select(vec!["!", "-"]), inner.clone())
                .prop_map(|(o, e)| format!("{o}{e}")),
            (inner.clone(), ident()).prop_map(|(e, k)| format!("{e}.{k}")),
            (inner.clone(), inner.clone()).prop_map(|(e, k)| format!("{e}[{k}]")),
            (ident(), prop::collection::vec(inner.clone(), 0..3))
                .prop_map(|(f, a)| format!("{f}({})", a.join(", "))),
            (inner.clone(), inner.clone(), inner.clone())
                .prop_map(|(c, a, b)| format!("({c} ? {a} : {b})")),
            (inner.clone(), inner.clone()).prop_map(|(t, h)| format!("new Proxy({t}, {h})")),
            (ident(), inner.clone()).prop_map(|(k, v)| format!("({{{k}: {v}}})")),
            (ident(), inner).prop_map(|(p, e)| format!("(function({p}) {{ return {e}; }})")),
        ]
    })
}

fn stmt() -> impl Strategy<Value = String> {
    prop_oneof![
        (ident(), expr()).prop_map(|(n, e)| format!("var {n} = {e};")),
        (ident(), ident(), expr()).prop_map(|(o, k, e)| format!("{o}.{k} = {e};")),
        expr().prop_map(|e| format!("{e};")),
        (expr(), expr()).prop_map(|(c, e)| format!("if ({c}) {{ {e}; }} else {{ return; }}")),
        (expr(), expr()).prop_map(|(c, e)| format!("while ({c}) {{ {e}; }}")),
        (ident(), ident(), expr())
            .prop_map(|(f, p, e)| format!("function {f}({p}) {{ return {e}; }}")),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generated_programs_round_trip(stmts in prop::collection::vec(stmt(), 1..6)) {
        let src = stmts.join("\n");
        let first = parse_source(&src).unwrap();
        let printed = pretty_print(&first);
        prop_assert_eq!(parse_source(&printed).unwrap(), first);
    }

    #[test]
    fn arbitrary_text_never_panics(src in "\\PC{0,80}") {
        if let Ok(tokens) = tokenize(&src) {
            let _ = parse(&tokens);
        }
    }

    #[test]
    fn token_soup_never_panics(parts in prop::collection::vec(
        prop::sample::select(vec![
            "var", "x", "=", ";", "(", ")", "{", "}", "[", "]", ".", ",", ":", "?", "==", ":==:", ":===:",
            "function", "return", "if", "else", "while", "new", "Proxy", "1", "\"s\"", "+", "!", "&&",
        ]),
        0..40,
    )) {
        let src = parts.join(" ");
        let tokens = tokenize(&src).unwrap();
        let _ = parse(&tokens);
    }
}
