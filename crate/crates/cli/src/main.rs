//! `proxylang` command-line tool.

use std::fs;
use std::io::{self, BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{Parser, Subcommand};

use proxylang::corpus::{run_corpus, CorpusOutcome};
use proxylang::frontend::{parse_source, tokenize, TokenKind};
use proxylang::{run_script, EqualityMode, Interpreter, Prelude, RunConfig, Value};

const EXIT_RUNTIME: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "proxylang", version, about = "Run proxylang scripts")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// How `==` and `===` treat proxies.
    #[arg(
        long,
        global = true,
        value_name = "MODE",
        default_value = "opaque",
        value_parser = PossibleValuesParser::new(EqualityMode::ALL.map(EqualityMode::name))
            .map(|s| s.parse::<EqualityMode>().expect("restricted to known names")),
    )]
    equality_mode: EqualityMode,

    /// Load this file instead of the built-in prelude.
    #[arg(
        long,
        global = true,
        value_name = "PATH",
        conflicts_with = "no_prelude"
    )]
    prelude: Option<PathBuf>,

    /// Start without any prelude.
    #[arg(long, global = true)]
    no_prelude: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a script.
    Run { script: PathBuf },
    /// Interactive read-eval-print loop.
    Repl,
    /// Run every `.plx` file that has an `.expected` sibling and compare.
    Corpus { dir: PathBuf },
}

fn read(path: &Path) -> Result<String, ExitCode> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("proxylang: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_USAGE)
    })
}

fn prelude(cli: &Cli) -> Result<Prelude, ExitCode> {
    if cli.no_prelude {
        return Ok(Prelude::None);
    }
    match &cli.prelude {
        Some(path) => read(path).map(Prelude::Source),
        None => Ok(Prelude::Embedded),
    }
}

fn run(path: &Path, config: RunConfig) -> ExitCode {
    let source = match read(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let result = run_script(&source, &config);
    print!("{}", result.output);
    let _ = io::stdout().flush();
    match result.status {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}: {err}", path.display());
            ExitCode::from(if err.is_static() {
                EXIT_USAGE
            } else {
                EXIT_RUNTIME
            })
        }
    }
}

fn report_mismatch(outcome: &CorpusOutcome) {
    eprintln!(
        "FAIL {} (mode {})",
        outcome.path.display(),
        outcome.mode.name()
    );
    let expected: Vec<&str> = outcome.expected.lines().collect();
    let actual: Vec<&str> = outcome.actual.lines().collect();
    let line = (0..expected.len().max(actual.len()))
        .find(|&i| expected.get(i) != actual.get(i))
        .unwrap_or(0);
    eprintln!("  first difference at output line {}", line + 1);
    eprintln!(
        "  expected: {}",
        expected.get(line).copied().unwrap_or("<end of output>")
    );
    eprintln!(
        "  actual:   {}",
        actual.get(line).copied().unwrap_or("<end of output>")
    );
}

fn corpus(dir: &Path, mode: EqualityMode, prelude: &Prelude) -> ExitCode {
    let report = match run_corpus(dir, mode, prelude) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("proxylang: cannot read corpus {}: {e}", dir.display());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    for outcome in report.outcomes.iter().filter(|o| !o.passed()) {
        report_mismatch(outcome);
    }
    println!("{}", report.summary());
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_RUNTIME)
    }
}

/// True while `src` has unclosed brackets, so the REPL keeps reading.
fn incomplete(src: &str) -> bool {
    let Ok(tokens) = tokenize(src) else {
        return false;
    };
    let depth: i32 = tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Punctuator)
        .map(|t| match t.lexeme.as_str() {
            "(" | "[" | "{" => 1,
            ")" | "]" | "}" => -1,
            _ => 0,
        })
        .sum();
    depth > 0
}

fn repl(mode: EqualityMode, prelude: &Prelude) -> ExitCode {
    let mut it = Interpreter::new(mode);
    if let Some(src) = prelude.source() {
        if let Err(e) = it.eval_library(src) {
            eprintln!("prelude: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let interactive = io::stdin().is_terminal();
    let mut stdout = io::stdout();
    let mut buffer = String::new();
    let mut lines = io::stdin().lock().lines();
    loop {
        if interactive {
            let _ = write!(stdout, "{}", if buffer.is_empty() { "> " } else { "... " });
            let _ = stdout.flush();
        }
        let line = match lines.next() {
            Some(Ok(line)) => line,
            Some(Err(e)) => {
                eprintln!("proxylang: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            None => break,
        };
        buffer.push_str(&line);
        buffer.push('\n');
        if incomplete(&buffer) {
            continue;
        }
        eval_chunk(&mut it, &buffer);
        buffer.clear();
    }
    if !buffer.trim().is_empty() {
        eval_chunk(&mut it, &buffer);
    }
    ExitCode::SUCCESS
}

fn eval_chunk(it: &mut Interpreter, src: &str) {
    // Accept a final expression typed without its semicolon.
    let with_semicolon = format!("{};", src.trim_end());
    let src = match (parse_source(src), parse_source(&with_semicolon)) {
        (Err(_), Ok(_)) => with_semicolon.as_str(),
        _ => src,
    };
    let result = it.eval_source(src);
    print!("{}", it.take_output());
    match result {
        Ok(Some(value)) => println!("{}", render_result(it, &value)),
        Ok(None) => {}
        Err(e) => eprintln!("{e}"),
    }
    let _ = io::stdout().flush();
}

fn render_result(it: &Interpreter, value: &Value) -> String {
    match value {
        Value::Str(s) => format!("{:?}", &**s),
        other => it.render(other),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let prelude = match prelude(&cli) {
        Ok(p) => p,
        Err(code) => return code,
    };
    match &cli.command {
        Command::Run { script } => run(
            script,
            RunConfig::new(cli.equality_mode).with_prelude(prelude),
        ),
        Command::Repl => repl(cli.equality_mode, &prelude),
        Command::Corpus { dir } => corpus(dir, cli.equality_mode, &prelude),
    }
}
