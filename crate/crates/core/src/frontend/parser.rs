//! Recursive-descent parser with precedence climbing for binary operators.

use std::rc::Rc;

use super::ast::*;
use super::lexer::{unescape_string, Token, TokenKind};
use crate::error::ParseError;

/// Limit on syntax tree depth. Nested expressions, blocks and left-growing
/// operator or member chains all count toward it; deeper input is rejected
/// instead of exhausting the native stack.
pub const MAX_NESTING: usize = 512;

/// Tokens that may legally follow a complete equality comparison.
const AFTER_EQUALITY: &str = "`&&`, `||`, `?`, `)`, `]`, `,`, `:`, `}` or `;`";

pub fn parse(tokens: &[Token]) -> Result<Program, ParseError> {
    let mut parser = Parser {
        tokens,
        index: 0,
        depth: 0,
    };
    let mut statements = Vec::new();
    while !parser.at_end() {
        statements.push(parser.statement()?);
    }
    Ok(Program { statements })
}

struct Parser<'t> {
    tokens: &'t [Token],
    index: usize,
    depth: usize,
}

impl<'t> Parser<'t> {
    fn at_end(&self) -> bool {
        self.index >= self.tokens.len()
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.index)
    }

    fn peek_at(&self, offset: usize) -> Option<&'t Token> {
        self.tokens.get(self.index + offset)
    }

    fn advance(&mut self) -> Option<&'t Token> {
        let tok = self.tokens.get(self.index);
        if tok.is_some() {
            self.index += 1;
        }
        tok
    }

    fn check_punct(&self, p: &str) -> bool {
        self.peek().is_some_and(|t| t.is_punct(p))
    }

    fn check_keyword(&self, k: &str) -> bool {
        self.peek().is_some_and(|t| t.is_keyword(k))
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.check_punct(p) {
            self.index += 1;
            true
        } else {
            false
        }
    }

    fn pos(&self) -> Pos {
        match self.peek() {
            Some(t) => Pos {
                line: t.line,
                column: t.column,
            },
            None => self.end_pos(),
        }
    }

    fn end_pos(&self) -> Pos {
        match self.tokens.last() {
            Some(t) => Pos {
                line: t.line,
                column: t.column + t.lexeme.chars().count() as u32,
            },
            None => Pos { line: 1, column: 1 },
        }
    }

    fn error_here(&self, expected: &str) -> ParseError {
        let pos = self.pos();
        let found = match self.peek() {
            Some(t) => format!("`{}`", t.lexeme),
            None => "end of input".to_string(),
        };
        ParseError {
            message: format!("expected {expected} but found {found}"),
            line: pos.line,
            column: pos.column,
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), ParseError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.error_here(&format!("`{p}`")))
        }
    }

    fn expect_identifier(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                self.index += 1;
                Ok(t.lexeme.clone())
            }
            _ => Err(self.error_here("an identifier")),
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        // MAX_NESTING bounds the recursion; the native stack grows on demand.
        self.depth += 1;
        if self.depth > MAX_NESTING {
            let pos = self.pos();
            return Err(ParseError {
                message: format!("nesting deeper than {MAX_NESTING} levels"),
                line: pos.line,
                column: pos.column,
            });
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        self.enter()?;
        let stmt = stacker::maybe_grow(64 * 1024, 1024 * 1024, || self.statement_inner());
        self.leave();
        stmt
    }

    fn statement_inner(&mut self) -> Result<Stmt, ParseError> {
        let pos = self.pos();
        let kind = if self.check_keyword("var") {
            self.advance();
            let name = self.expect_identifier()?;
            self.expect_punct("=")?;
            let init = self.expression()?;
            self.expect_punct(";")?;
            StmtKind::VarDecl { name, init }
        } else if self.check_keyword("function")
            && self
                .peek_at(1)
                .is_some_and(|t| t.kind == TokenKind::Identifier)
        {
            self.advance();
            let name = self.expect_identifier()?;
            StmtKind::FunctionDecl(Rc::new(self.function_rest(Some(name))?))
        } else if self.check_keyword("if") {
            self.advance();
            self.expect_punct("(")?;
            let cond = self.expression()?;
            self.expect_punct(")")?;
            let then_branch = self.block()?;
            let else_branch = if self.check_keyword("else") {
                self.advance();
                if self.check_keyword("if") {
                    Some(vec![self.statement()?])
                } else {
                    Some(self.block()?)
                }
            } else {
                None
            };
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            }
        } else if self.check_keyword("while") {
            self.advance();
            self.expect_punct("(")?;
            let cond = self.expression()?;
            self.expect_punct(")")?;
            let body = self.block()?;
            StmtKind::While { cond, body }
        } else if self.check_keyword("return") {
            self.advance();
            let value = if self.check_punct(";") {
                None
            } else {
                Some(self.expression()?)
            };
            self.expect_punct(";")?;
            StmtKind::Return(value)
        } else if self.check_punct("{") {
            StmtKind::Block(self.block()?)
        } else {
            let expr = self.expression()?;
            if self.check_punct("=") {
                let target = self.assign_target(expr)?;
                self.advance();
                let value = self.expression()?;
                self.expect_punct(";")?;
                StmtKind::Assign { target, value }
            } else {
                if !self.check_punct(";") {
                    return Err(self.error_here("`;` or `=`"));
                }
                self.advance();
                StmtKind::Expr(expr)
            }
        };
        Ok(Stmt { kind, pos })
    }

    fn assign_target(&self, expr: Expr) -> Result<AssignTarget, ParseError> {
        match expr.kind {
            ExprKind::Identifier(name) => Ok(AssignTarget::Variable(name)),
            ExprKind::Get { object, key } => Ok(AssignTarget::Property {
                object: *object,
                key,
            }),
            _ => Err(ParseError {
                message: "expected an identifier or property access before `=`".into(),
                line: expr.pos.line,
                column: expr.pos.column,
            }),
        }
    }

    fn block(&mut self) -> Result<Vec<Stmt>, ParseError> {
        self.expect_punct("{")?;
        let mut body = Vec::new();
        while !self.check_punct("}") {
            if self.at_end() {
                return Err(self.error_here("a statement or `}`"));
            }
            body.push(self.statement()?);
        }
        self.advance();
        Ok(body)
    }

    /// Parses `( params ) { body }` after the `function` keyword and name.
    fn function_rest(&mut self, name: Option<String>) -> Result<FunctionDef, ParseError> {
        self.expect_punct("(")?;
        let mut params = Vec::new();
        if !self.check_punct(")") {
            loop {
                params.push(self.expect_identifier()?);
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_punct(")")?;
        let body = self.block()?;
        Ok(FunctionDef {
            name,
            params,
            body: body.into(),
        })
    }

    pub fn expression(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let expr = stacker::maybe_grow(64 * 1024, 1024 * 1024, || self.conditional());
        self.leave();
        expr
    }

    fn conditional(&mut self) -> Result<Expr, ParseError> {
        let cond = self.binary(1)?;
        if !self.check_punct("?") {
            return Ok(cond);
        }
        self.advance();
        let then = self.expression()?;
        self.expect_punct(":")?;
        let otherwise = self.expression()?;
        let pos = cond.pos;
        Ok(Expr::new(
            ExprKind::Conditional {
                cond: Box::new(cond),
                then: Box::new(then),
                otherwise: Box::new(otherwise),
            },
            pos,
        ))
    }

    fn peek_binary_op(&self) -> Option<BinaryOp> {
        let tok = self.peek()?;
        if tok.kind != TokenKind::Punctuator {
            return None;
        }
        BinaryOp::from_symbol(&tok.lexeme)
    }

    fn binary(&mut self, min_prec: u8) -> Result<Expr, ParseError> {
        let saved = self.depth;
        let result = self.binary_chain(min_prec);
        self.depth = saved;
        result
    }

    fn binary_chain(&mut self, min_prec: u8) -> Result<Expr, ParseError> {
        let mut left = self.unary()?;
        let mut last_equality: Option<BinaryOp> = None;
        while let Some(op) = self.peek_binary_op() {
            if op.precedence() < min_prec {
                break;
            }
            if op.is_equality() {
                if let Some(prev) = last_equality {
                    if prev != op {
                        let mut err = self.error_here(AFTER_EQUALITY);
                        err.message.push_str(&format!(
                            " (`{prev}` and `{op}` do not chain; add parentheses)"
                        ));
                        return Err(err);
                    }
                }
                last_equality = Some(op);
            } else {
                last_equality = None;
            }
            self.enter()?;
            self.advance();
            let right = self.binary(op.precedence() + 1)?;
            let pos = left.pos;
            left = Expr::new(
                ExprKind::Binary {
                    op,
                    left: Box::new(left),
                    right: Box::new(right),
                },
                pos,
            );
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let op = if self.check_punct("!") {
            UnaryOp::Not
        } else if self.check_punct("-") {
            UnaryOp::Neg
        } else {
            return self.postfix();
        };
        self.advance();
        self.enter()?;
        let operand = stacker::maybe_grow(64 * 1024, 1024 * 1024, || self.unary());
        self.leave();
        Ok(Expr::new(
            ExprKind::Unary {
                op,
                operand: Box::new(operand?),
            },
            pos,
        ))
    }

    fn arguments(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect_punct("(")?;
        let mut args = Vec::new();
        if !self.check_punct(")") {
            loop {
                args.push(self.expression()?);
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_punct(")")?;
        Ok(args)
    }

    fn property_name(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(t) if matches!(t.kind, TokenKind::Identifier | TokenKind::Keyword) => {
                self.index += 1;
                Ok(t.lexeme.clone())
            }
            _ => Err(self.error_here("a property name")),
        }
    }

    /// Applies one `.name` or `[expr]` suffix, if present. Calls are handled
    /// by the caller.
    fn member_suffix(&mut self, expr: Expr) -> Result<(Expr, bool), ParseError> {
        let pos = expr.pos;
        if self.eat_punct(".") {
            let name = self.property_name()?;
            return Ok((
                Expr::new(
                    ExprKind::Get {
                        object: Box::new(expr),
                        key: PropertyKey::Static(name),
                    },
                    pos,
                ),
                true,
            ));
        }
        if self.eat_punct("[") {
            let key = self.expression()?;
            self.expect_punct("]")?;
            return Ok((
                Expr::new(
                    ExprKind::Get {
                        object: Box::new(expr),
                        key: PropertyKey::Computed(Box::new(key)),
                    },
                    pos,
                ),
                true,
            ));
        }
        Ok((expr, false))
    }

    fn postfix(&mut self) -> Result<Expr, ParseError> {
        let saved = self.depth;
        let result = self.postfix_chain();
        self.depth = saved;
        result
    }

    fn postfix_chain(&mut self) -> Result<Expr, ParseError> {
        let mut expr = if self.check_keyword("new") {
            let pos = self.pos();
            self.advance();
            self.enter()?;
            let callee = self.new_callee();
            self.leave();
            let callee = callee?;
            let args = if self.check_punct("(") {
                self.arguments()?
            } else {
                Vec::new()
            };
            Expr::new(
                ExprKind::New {
                    callee: Box::new(callee),
                    args,
                },
                pos,
            )
        } else {
            self.primary()?
        };
        loop {
            self.enter()?;
            let (next, advanced) = self.member_suffix(expr)?;
            expr = next;
            if advanced {
                continue;
            }
            if self.check_punct("(") {
                let args = self.arguments()?;
                let pos = expr.pos;
                expr = match expr.kind {
                    ExprKind::Get { object, key } => {
                        Expr::new(ExprKind::MethodCall { object, key, args }, pos)
                    }
                    kind => Expr::new(
                        ExprKind::Call {
                            callee: Box::new(Expr::new(kind, pos)),
                            args,
                        },
                        pos,
                    ),
                };
                continue;
            }
            break;
        }
        Ok(expr)
    }

    fn new_callee(&mut self) -> Result<Expr, ParseError> {
        let mut expr = if self.check_keyword("new") {
            self.postfix()?
        } else {
            self.primary()?
        };
        loop {
            self.enter()?;
            let (next, advanced) = self.member_suffix(expr)?;
            expr = next;
            if !advanced {
                return Ok(expr);
            }
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let Some(tok) = self.peek() else {
            return Err(self.error_here("an expression"));
        };
        let kind = match tok.kind {
            TokenKind::Number => {
                self.advance();
                let value = tok.lexeme.parse::<f64>().map_err(|_| ParseError {
                    message: format!("invalid number literal `{}`", tok.lexeme),
                    line: tok.line,
                    column: tok.column,
                })?;
                ExprKind::Number(value)
            }
            TokenKind::String => {
                self.advance();
                ExprKind::Str(unescape_string(&tok.lexeme))
            }
            TokenKind::Identifier => {
                self.advance();
                ExprKind::Identifier(tok.lexeme.clone())
            }
            TokenKind::Keyword => match tok.lexeme.as_str() {
                "true" => {
                    self.advance();
                    ExprKind::Bool(true)
                }
                "false" => {
                    self.advance();
                    ExprKind::Bool(false)
                }
                "null" => {
                    self.advance();
                    ExprKind::Null
                }
                "undefined" => {
                    self.advance();
                    ExprKind::Undefined
                }
                "this" => {
                    self.advance();
                    ExprKind::This
                }
                "function" => {
                    self.advance();
                    let name = match self.peek() {
                        Some(t) if t.kind == TokenKind::Identifier => {
                            self.advance();
                            Some(t.lexeme.clone())
                        }
                        _ => None,
                    };
                    ExprKind::Function(Rc::new(self.function_rest(name)?))
                }
                _ => return Err(self.error_here("an expression")),
            },
            TokenKind::Punctuator => match tok.lexeme.as_str() {
                "(" => {
                    self.advance();
                    let inner = self.expression()?;
                    self.expect_punct(")")?;
                    return Ok(inner);
                }
                "{" => {
                    self.advance();
                    self.object_literal()?
                }
                _ => return Err(self.error_here("an expression")),
            },
        };
        Ok(Expr::new(kind, pos))
    }

    fn object_literal(&mut self) -> Result<ExprKind, ParseError> {
        let mut props: Vec<(String, Expr)> = Vec::new();
        while !self.check_punct("}") {
            let key_pos = self.pos();
            let key = match self.peek() {
                Some(t) if matches!(t.kind, TokenKind::Identifier | TokenKind::Keyword) => {
                    t.lexeme.clone()
                }
                Some(t) if t.kind == TokenKind::String => unescape_string(&t.lexeme),
                Some(t) if t.kind == TokenKind::Number => {
                    let n: f64 = t.lexeme.parse().unwrap_or(f64::NAN);
                    crate::value::number_to_string(n)
                }
                _ => return Err(self.error_here("a property name or `}`")),
            };
            self.advance();
            if props.iter().any(|(k, _)| *k == key) {
                return Err(ParseError {
                    message: format!("duplicate property `{key}` in object literal"),
                    line: key_pos.line,
                    column: key_pos.column,
                });
            }
            self.expect_punct(":")?;
            let value = self.expression()?;
            props.push((key, value));
            if !self.eat_punct(",") {
                break;
            }
        }
        self.expect_punct("}")?;
        Ok(ExprKind::Object(props))
    }
}
