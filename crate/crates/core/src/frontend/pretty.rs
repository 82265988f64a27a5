//! Renders a syntax tree back to source text that parses to the same tree.
//!
//! Compound expressions are fully parenthesized, and object literals and
//! function expressions are always wrapped, so the output never depends on
//! precedence or statement-start ambiguities.

use std::fmt::Write;

use super::ast::*;
use super::lexer::is_keyword;
use crate::value::number_to_string;

pub fn pretty_print(program: &Program) -> String {
    let mut out = String::new();
    for stmt in &program.statements {
        write_stmt(&mut out, stmt, 0);
    }
    out
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("    ");
    }
}

fn write_block(out: &mut String, body: &[Stmt], level: usize) {
    out.push_str("{\n");
    for stmt in body {
        write_stmt(out, stmt, level + 1);
    }
    indent(out, level);
    out.push('}');
}

fn write_stmt(out: &mut String, stmt: &Stmt, level: usize) {
    indent(out, level);
    match &stmt.kind {
        StmtKind::VarDecl { name, init } => {
            let _ = write!(out, "var {name} = ");
            write_expr(out, init, level);
            out.push(';');
        }
        StmtKind::Assign { target, value } => {
            match target {
                AssignTarget::Variable(name) => out.push_str(name),
                AssignTarget::Property { object, key } => write_member(out, object, key, level),
            }
            out.push_str(" = ");
            write_expr(out, value, level);
            out.push(';');
        }
        StmtKind::Expr(e) => {
            write_expr(out, e, level);
            out.push(';');
        }
        StmtKind::If {
            cond,
            then_branch,
            else_branch,
        } => {
            out.push_str("if (");
            write_expr(out, cond, level);
            out.push_str(") ");
            write_block(out, then_branch, level);
            if let Some(other) = else_branch {
                out.push_str(" else ");
                write_block(out, other, level);
            }
        }
        StmtKind::While { cond, body } => {
            out.push_str("while (");
            write_expr(out, cond, level);
            out.push_str(") ");
            write_block(out, body, level);
        }
        StmtKind::Return(value) => {
            out.push_str("return");
            if let Some(v) = value {
                out.push(' ');
                write_expr(out, v, level);
            }
            out.push(';');
        }
        StmtKind::Block(body) => write_block(out, body, level),
        StmtKind::FunctionDecl(def) => write_function(out, def, level),
    }
    out.push('\n');
}

fn write_function(out: &mut String, def: &FunctionDef, level: usize) {
    out.push_str("function");
    if let Some(name) = &def.name {
        out.push(' ');
        out.push_str(name);
    }
    let _ = write!(out, "({}) ", def.params.join(", "));
    write_block(out, &def.body, level);
}

fn write_string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn is_plain_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_' || c == '$')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '$')
}

fn write_member(out: &mut String, object: &Expr, key: &PropertyKey, level: usize) {
    write_expr(out, object, level);
    match key {
        PropertyKey::Static(name) => {
            out.push('.');
            out.push_str(name);
        }
        PropertyKey::Computed(k) => {
            out.push('[');
            write_expr(out, k, level);
            out.push(']');
        }
    }
}

fn write_args(out: &mut String, args: &[Expr], level: usize) {
    out.push('(');
    for (i, arg) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_expr(out, arg, level);
    }
    out.push(')');
}

fn write_expr(out: &mut String, expr: &Expr, level: usize) {
    match &expr.kind {
        ExprKind::Number(n) => out.push_str(&number_to_string(*n)),
        ExprKind::Str(s) => write_string(out, s),
        ExprKind::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        ExprKind::Null => out.push_str("null"),
        ExprKind::Undefined => out.push_str("undefined"),
        ExprKind::This => out.push_str("this"),
        ExprKind::Identifier(name) => out.push_str(name),
        ExprKind::Object(props) => {
            out.push_str("({");
            for (i, (key, value)) in props.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                if is_plain_name(key) || is_keyword(key) {
                    out.push_str(key);
                } else {
                    write_string(out, key);
                }
                out.push_str(": ");
                write_expr(out, value, level);
            }
            out.push_str("})");
        }
        ExprKind::Function(def) => {
            out.push('(');
            write_function(out, def, level);
            out.push(')');
        }
        ExprKind::Get { object, key } => write_member(out, object, key, level),
        ExprKind::Call { callee, args } => {
            write_expr(out, callee, level);
            write_args(out, args, level);
        }
        ExprKind::MethodCall { object, key, args } => {
            write_member(out, object, key, level);
            write_args(out, args, level);
        }
        ExprKind::New { callee, args } => {
            // parenthesized callee keeps `new (f())(x)` distinct from `new f()(x)`
            out.push_str("new (");
            write_expr(out, callee, level);
            out.push(')');
            write_args(out, args, level);
        }
        ExprKind::Binary { op, left, right } => {
            out.push('(');
            write_expr(out, left, level);
            let _ = write!(out, " {op} ");
            write_expr(out, right, level);
            out.push(')');
        }
        ExprKind::Unary { op, operand } => {
            out.push('(');
            out.push_str(op.symbol());
            write_expr(out, operand, level);
            out.push(')');
        }
        ExprKind::Conditional {
            cond,
            then,
            otherwise,
        } => {
            out.push('(');
            write_expr(out, cond, level);
            out.push_str(" ? ");
            write_expr(out, then, level);
            out.push_str(" : ");
            write_expr(out, otherwise, level);
            out.push(')');
        }
    }
}
