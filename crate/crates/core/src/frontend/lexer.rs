//! Tokenizer for `.plx` source text.

use crate::error::LexError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Identifier,
    Number,
    String,
    Punctuator,
    Keyword,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Exact source slice, including the quotes of string literals.
    pub lexeme: String,
    pub line: u32,
    pub column: u32,
}

impl Token {
    pub fn new(kind: TokenKind, lexeme: impl Into<String>, line: u32, column: u32) -> Self {
        Token {
            kind,
            lexeme: lexeme.into(),
            line,
            column,
        }
    }

    pub fn is_punct(&self, p: &str) -> bool {
        self.kind == TokenKind::Punctuator && self.lexeme == p
    }

    pub fn is_keyword(&self, k: &str) -> bool {
        self.kind == TokenKind::Keyword && self.lexeme == k
    }
}

pub const KEYWORDS: &[&str] = &[
    "var",
    "function",
    "if",
    "else",
    "while",
    "return",
    "true",
    "false",
    "null",
    "undefined",
    "new",
    "this",
];

/// Punctuators ordered so that the first match at any position is the longest.
pub const PUNCTUATORS: &[&str] = &[
    ":===:", ":==:", "===", "!==", "==", "!=", "<=", ">=", "&&", "||", "(", ")", "{", "}", "[",
    "]", ",", ";", ".", ":", "?", "=", "<", ">", "+", "-", "*", "/", "!",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || c == '$'
}

fn is_ident_continue(c: char) -> bool {
    is_ident_start(c) || c.is_ascii_digit()
}

struct Cursor<'a> {
    src: &'a str,
    offset: usize,
    line: u32,
    column: u32,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.offset..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_second(&self) -> Option<char> {
        self.rest().chars().nth(1)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> LexError {
        LexError {
            message: message.into(),
            line: self.line,
            column: self.column,
        }
    }
}

/// Splits `source` into tokens, skipping whitespace and comments.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor {
        src: source,
        offset: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '/' && cur.peek_second() == Some('/') {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        if c == '/' && cur.peek_second() == Some('*') {
            let start = cur.error("unterminated block comment");
            cur.bump();
            cur.bump();
            loop {
                match cur.peek() {
                    None => return Err(start),
                    Some('*') if cur.peek_second() == Some('/') => {
                        cur.bump();
                        cur.bump();
                        break;
                    }
                    Some(_) => {
                        cur.bump();
                    }
                }
            }
            continue;
        }

        let (line, column, start) = (cur.line, cur.column, cur.offset);

        if is_ident_start(c) {
            while cur.peek().is_some_and(is_ident_continue) {
                cur.bump();
            }
            let word = &source[start..cur.offset];
            let kind = if is_keyword(word) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            };
            tokens.push(Token::new(kind, word, line, column));
            continue;
        }

        if c.is_ascii_digit() {
            while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                cur.bump();
            }
            if cur.peek() == Some('.') && cur.peek_second().is_some_and(|c| c.is_ascii_digit()) {
                cur.bump();
                while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                    cur.bump();
                }
            }
            if cur.peek().is_some_and(is_ident_start) {
                return Err(cur.error("identifier starts immediately after number"));
            }
            tokens.push(Token::new(
                TokenKind::Number,
                &source[start..cur.offset],
                line,
                column,
            ));
            continue;
        }

        if c == '"' || c == '\'' {
            let opening = cur.error("unterminated string literal");
            cur.bump();
            loop {
                match cur.peek() {
                    None | Some('\n') => return Err(opening),
                    Some('\\') => {
                        cur.bump();
                        match cur.peek() {
                            Some('n' | 't' | '"' | '\'' | '\\') => {
                                cur.bump();
                            }
                            None => return Err(opening),
                            Some(other) => {
                                return Err(cur.error(format!("unsupported escape '\\{other}'")))
                            }
                        }
                    }
                    Some(q) if q == c => {
                        cur.bump();
                        break;
                    }
                    Some(_) => {
                        cur.bump();
                    }
                }
            }
            tokens.push(Token::new(
                TokenKind::String,
                &source[start..cur.offset],
                line,
                column,
            ));
            continue;
        }

        match PUNCTUATORS.iter().find(|p| cur.rest().starts_with(**p)) {
            Some(p) => {
                for _ in 0..p.len() {
                    cur.bump();
                }
                tokens.push(Token::new(TokenKind::Punctuator, *p, line, column));
            }
            None => return Err(cur.error(format!("unrecognized character '{c}'"))),
        }
    }

    Ok(tokens)
}

/// Decodes the body of a string literal lexeme (quotes included).
pub fn unescape_string(lexeme: &str) -> String {
    let inner = &lexeme[1..lexeme.len() - 1];
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('n') => out.push('\n'),
                Some('t') => out.push('\t'),
                Some(other) => out.push(other),
                None => {}
            }
        } else {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lexemes(src: &str) -> Vec<String> {
        tokenize(src)
            .unwrap()
            .into_iter()
            .map(|t| t.lexeme)
            .collect()
    }

    #[test]
    fn empty_source() {
        assert!(tokenize("").unwrap().is_empty());
        assert!(tokenize("  // only a comment\n/* and a block */")
            .unwrap()
            .is_empty());
    }

    #[test]
    fn proxy_construction_line() {
        assert_eq!(
            lexemes("var p = new Proxy (target, handler);"),
            ["var", "p", "=", "new", "Proxy", "(", "target", ",", "handler", ")", ";"]
        );
    }

    #[test]
    fn opaque_operators_use_longest_match() {
        let toks = tokenize("a :===: b").unwrap();
        assert_eq!(toks.len(), 3);
        assert_eq!(toks[1].kind, TokenKind::Punctuator);
        assert_eq!(toks[1].lexeme, ":===:");
        assert_eq!(lexemes("a:==:b"), ["a", ":==:", "b"]);
        assert_eq!(lexemes("a===b"), ["a", "===", "b"]);
        assert_eq!(lexemes("a!==b!=c"), ["a", "!==", "b", "!=", "c"]);
    }

    #[test]
    fn positions_are_one_based() {
        let toks = tokenize("x\n  yy;").unwrap();
        assert_eq!((toks[0].line, toks[0].column), (1, 1));
        assert_eq!((toks[1].line, toks[1].column), (2, 3));
        assert_eq!((toks[2].line, toks[2].column), (2, 5));
    }

    #[test]
    fn both_quote_styles_and_escapes() {
        let toks = tokenize(r#"'foo' "a\"b\n""#).unwrap();
        assert_eq!(toks[0].kind, TokenKind::String);
        assert_eq!(unescape_string(&toks[0].lexeme), "foo");
        assert_eq!(unescape_string(&toks[1].lexeme), "a\"b\n");
    }

    #[test]
    fn errors_carry_positions() {
        let err = tokenize("var x = 1;\n  #").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
        let err = tokenize("x = 'abc").unwrap_err();
        assert_eq!((err.line, err.column), (1, 5));
        assert!(tokenize("'\\q'").is_err());
        assert!(tokenize("/* open").is_err());
    }

    #[test]
    fn numbers() {
        assert_eq!(lexemes("1 2.5 10.x"), ["1", "2.5", "10", ".", "x"]);
    }
}
