//! Tree-walking evaluator and the interpreter instance that owns the heap.

pub mod builtins;
pub mod env;

use std::rc::Rc;

use crate::equality::EqualityMode;
use crate::error::{Error, ErrorKind, RtResult, RuntimeError};
use crate::frontend::ast::*;
use crate::frontend::{parse_library, parse_source};
use crate::object::{to_property_key, Callable, Closure, Heap};
use crate::proxy::{TransparencyOverrideStack, TransparencyPolicy};
use crate::value::{number_to_string, ObjectRef, Value};

use env::Env;

/// Maximum number of nested script function frames.
pub const MAX_CALL_DEPTH: usize = 1024;

const RED_ZONE: usize = 128 * 1024;
const STACK_SEGMENT: usize = 4 * 1024 * 1024;

enum Flow {
    Normal,
    Return(Value),
}

/// One interpreter instance: a heap, a global scope and a fixed equality
/// mode. Instances share nothing, so independent scripts can run on
/// separate threads with one instance each.
pub struct Interpreter {
    pub(crate) heap: Heap,
    globals: Env,
    mode: EqualityMode,
    policy: TransparencyPolicy,
    pub(crate) overrides: TransparencyOverrideStack,
    depth: usize,
    output: String,
}

impl Interpreter {
    /// A fresh instance with builtins bound and no prelude loaded.
    pub fn new(mode: EqualityMode) -> Self {
        Self::with_policy(mode, TransparencyPolicy::Handler)
    }

    pub fn with_policy(mode: EqualityMode, policy: TransparencyPolicy) -> Self {
        let mut it = Interpreter {
            heap: Heap::new(),
            globals: Env::global(),
            mode,
            policy,
            overrides: TransparencyOverrideStack::default(),
            depth: 0,
            output: String::new(),
        };
        it.bind_builtins();
        it
    }

    pub fn mode(&self) -> EqualityMode {
        self.mode
    }

    pub fn transparency_policy(&self) -> TransparencyPolicy {
        self.policy
    }

    pub fn set_transparency_policy(&mut self, policy: TransparencyPolicy) {
        self.policy = policy;
    }

    pub fn heap(&self) -> &Heap {
        &self.heap
    }

    /// Current script call depth; zero whenever no script code is running.
    pub fn call_depth(&self) -> usize {
        self.depth
    }

    pub fn output(&self) -> &str {
        &self.output
    }

    pub fn take_output(&mut self) -> String {
        std::mem::take(&mut self.output)
    }

    pub(crate) fn write_output(&mut self, line: &str) {
        self.output.push_str(line);
        self.output.push('\n');
    }

    pub fn define_global(&mut self, name: &str, value: Value) {
        self.globals.declare(name, value);
    }

    pub fn global(&self, name: &str) -> Option<Value> {
        self.globals.lookup(name)
    }

    /// Parses and runs `source` in the global scope. Returns the value of the
    /// last statement when it is an expression statement.
    pub fn eval_source(&mut self, source: &str) -> Result<Option<Value>, Error> {
        let program = parse_source(source)?;
        Ok(self.eval_program(&program)?)
    }

    /// Evaluates library code such as the prelude. Errors raised later inside
    /// its functions are attributed to the calling line.
    pub fn eval_library(&mut self, source: &str) -> Result<Option<Value>, Error> {
        let program = parse_library(source)?;
        Ok(self.eval_program(&program)?)
    }

    pub fn eval_program(&mut self, program: &Program) -> RtResult<Option<Value>> {
        let globals = self.globals.clone();
        self.hoist(&program.statements, &globals);
        let mut last = None;
        for stmt in &program.statements {
            last = None;
            if let StmtKind::Expr(e) = &stmt.kind {
                last = Some(self.eval_expr(e, &globals)?);
                continue;
            }
            if let Flow::Return(_) = self.exec_stmt(stmt, &globals)? {
                break;
            }
        }
        Ok(last)
    }

    /// Text used by `print`. Objects, proxies included, all print alike.
    pub fn render(&self, v: &Value) -> String {
        match v {
            Value::Number(n) => number_to_string(*n),
            Value::Boolean(b) => b.to_string(),
            Value::Str(s) => s.to_string(),
            Value::Null => "null".into(),
            Value::Undefined => "undefined".into(),
            Value::Ref(_) => "[object]".into(),
        }
    }

    /// Calls any callable value.
    pub fn call_value(&mut self, f: &Value, this: Value, args: &[Value]) -> RtResult<Value> {
        match f {
            Value::Ref(r) => self.internal_call(*r, this, args),
            other => Err(RuntimeError::type_error(format!(
                "{} is not a function",
                self.render(other)
            ))),
        }
    }

    /// Runs a script function: a fresh scope under the captured one, with
    /// parameters bound (missing ones undefined, extras dropped).
    pub(crate) fn call_closure(
        &mut self,
        func: ObjectRef,
        closure: &Rc<Closure>,
        this: Value,
        args: &[Value],
    ) -> RtResult<Value> {
        if self.depth >= MAX_CALL_DEPTH {
            return Err(RuntimeError::new(
                ErrorKind::StackOverflow,
                format!("call stack exceeded {MAX_CALL_DEPTH} frames"),
            ));
        }
        self.depth += 1;
        let result = stacker::maybe_grow(RED_ZONE, STACK_SEGMENT, || {
            let def = &closure.def;
            let scope = closure.env.child();
            if let Some(name) = &def.name {
                scope.declare(name, Value::Ref(func));
            }
            scope.declare("this", this);
            for (i, param) in def.params.iter().enumerate() {
                scope.declare(param, args.get(i).cloned().unwrap_or(Value::Undefined));
            }
            self.exec_block(&def.body, &scope)
        });
        self.depth -= 1;
        Ok(match result? {
            Flow::Return(v) => v,
            Flow::Normal => Value::Undefined,
        })
    }

    fn make_function(&mut self, def: &Rc<FunctionDef>, env: &Env) -> Value {
        let closure = Closure {
            def: Rc::clone(def),
            env: env.clone(),
        };
        let r = self.heap.alloc(crate::object::HeapObject::Ordinary(
            crate::object::OrdinaryObject {
                callable: Some(Callable::Script(Rc::new(closure))),
                ..Default::default()
            },
        ));
        Value::Ref(r)
    }

    /// Function declarations are bound before the statements of their
    /// block run, so they may be called before they appear.
    fn hoist(&mut self, stmts: &[Stmt], env: &Env) {
        for stmt in stmts {
            if let StmtKind::FunctionDecl(def) = &stmt.kind {
                let f = self.make_function(def, env);
                env.declare(def.name.as_deref().unwrap_or_default(), f);
            }
        }
    }

    fn exec_block(&mut self, stmts: &[Stmt], env: &Env) -> RtResult<Flow> {
        self.hoist(stmts, env);
        for stmt in stmts {
            if let Flow::Return(v) = self.exec_stmt(stmt, env)? {
                return Ok(Flow::Return(v));
            }
        }
        Ok(Flow::Normal)
    }

    fn exec_stmt(&mut self, stmt: &Stmt, env: &Env) -> RtResult<Flow> {
        self.exec_stmt_inner(stmt, env)
            .map_err(|e| e.at_line(stmt.pos.line))
    }

    fn exec_stmt_inner(&mut self, stmt: &Stmt, env: &Env) -> RtResult<Flow> {
        match &stmt.kind {
            StmtKind::VarDecl { name, init } => {
                let v = self.eval_expr(init, env)?;
                env.declare(name, v);
            }
            StmtKind::Assign { target, value } => match target {
                AssignTarget::Variable(name) => {
                    let v = self.eval_expr(value, env)?;
                    if !env.assign(name, v) {
                        return Err(RuntimeError::reference_error(format!(
                            "assignment to undeclared variable `{name}`"
                        )));
                    }
                }
                AssignTarget::Property { object, key } => {
                    let obj = self.eval_expr(object, env)?;
                    let key = self.eval_key(key, env)?;
                    let v = self.eval_expr(value, env)?;
                    let Value::Ref(r) = obj else {
                        return Err(RuntimeError::type_error(format!(
                            "cannot set property '{key}' of {}",
                            self.render(&obj)
                        )));
                    };
                    self.internal_set(r, &key, v, &obj)?;
                }
            },
            StmtKind::Expr(e) => {
                self.eval_expr(e, env)?;
            }
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                if self.eval_expr(cond, env)?.truthy() {
                    return self.exec_block(then_branch, &env.child());
                } else if let Some(other) = else_branch {
                    return self.exec_block(other, &env.child());
                }
            }
            StmtKind::While { cond, body } => {
                while self.eval_expr(cond, env)?.truthy() {
                    if let Flow::Return(v) = self.exec_block(body, &env.child())? {
                        return Ok(Flow::Return(v));
                    }
                }
            }
            StmtKind::Return(value) => {
                let v = match value {
                    Some(e) => self.eval_expr(e, env)?,
                    None => Value::Undefined,
                };
                return Ok(Flow::Return(v));
            }
            StmtKind::Block(body) => return self.exec_block(body, &env.child()),
            StmtKind::FunctionDecl(_) => {}
        }
        Ok(Flow::Normal)
    }

    fn eval_key(&mut self, key: &PropertyKey, env: &Env) -> RtResult<String> {
        match key {
            PropertyKey::Static(name) => Ok(name.clone()),
            PropertyKey::Computed(e) => {
                let v = self.eval_expr(e, env)?;
                to_property_key(&v)
            }
        }
    }

    fn get_property(&mut self, obj: &Value, key: &str) -> RtResult<Value> {
        match obj {
            Value::Ref(r) => self.internal_get(*r, key, obj),
            other => Err(RuntimeError::type_error(format!(
                "cannot read property '{key}' of {}",
                self.render(other)
            ))),
        }
    }

    fn eval_args(&mut self, args: &[Expr], env: &Env) -> RtResult<Vec<Value>> {
        args.iter().map(|a| self.eval_expr(a, env)).collect()
    }

    fn eval_expr(&mut self, expr: &Expr, env: &Env) -> RtResult<Value> {
        stacker::maybe_grow(RED_ZONE, STACK_SEGMENT, || self.eval_expr_inner(expr, env))
            .map_err(|e| e.at_line(expr.pos.line))
    }

    fn eval_expr_inner(&mut self, expr: &Expr, env: &Env) -> RtResult<Value> {
        Ok(match &expr.kind {
            ExprKind::Number(n) => Value::Number(*n),
            ExprKind::Str(s) => Value::str(s),
            ExprKind::Bool(b) => Value::Boolean(*b),
            ExprKind::Null => Value::Null,
            ExprKind::Undefined => Value::Undefined,
            ExprKind::This => env.lookup("this").unwrap_or(Value::Undefined),
            ExprKind::Identifier(name) => env
                .lookup(name)
                .ok_or_else(|| RuntimeError::reference_error(format!("`{name}` is not defined")))?,
            ExprKind::Object(props) => {
                let mut values = Vec::with_capacity(props.len());
                for (key, e) in props {
                    values.push((key.clone(), self.eval_expr(e, env)?));
                }
                Value::Ref(self.heap.alloc_object(values))
            }
            ExprKind::Function(def) => self.make_function(def, env),
            ExprKind::Get { object, key } => {
                let obj = self.eval_expr(object, env)?;
                let key = self.eval_key(key, env)?;
                self.get_property(&obj, &key)?
            }
            ExprKind::Call { callee, args } => {
                let f = self.eval_expr(callee, env)?;
                let args = self.eval_args(args, env)?;
                self.call_value(&f, Value::Undefined, &args)?
            }
            ExprKind::MethodCall { object, key, args } => {
                let obj = self.eval_expr(object, env)?;
                let key = self.eval_key(key, env)?;
                let f = self.get_property(&obj, &key)?;
                let args = self.eval_args(args, env)?;
                if !f.is_object() {
                    return Err(RuntimeError::type_error(format!(
                        "property '{key}' is not a function"
                    )));
                }
                self.call_value(&f, obj, &args)?
            }
            ExprKind::New { callee, args } => {
                let f = self.eval_expr(callee, env)?;
                let args = self.eval_args(args, env)?;
                self.construct(&f, &args)?
            }
            ExprKind::Binary { op, left, right } => match op {
                BinaryOp::And => {
                    let l = self.eval_expr(left, env)?;
                    if l.truthy() {
                        self.eval_expr(right, env)?
                    } else {
                        l
                    }
                }
                BinaryOp::Or => {
                    let l = self.eval_expr(left, env)?;
                    if l.truthy() {
                        l
                    } else {
                        self.eval_expr(right, env)?
                    }
                }
                _ => {
                    let l = self.eval_expr(left, env)?;
                    let r = self.eval_expr(right, env)?;
                    self.binary(*op, &l, &r)?
                }
            },
            ExprKind::Unary { op, operand } => {
                let v = self.eval_expr(operand, env)?;
                match op {
                    UnaryOp::Not => Value::Boolean(!v.truthy()),
                    UnaryOp::Neg => Value::Number(-v.to_number()),
                }
            }
            ExprKind::Conditional {
                cond,
                then,
                otherwise,
            } => {
                if self.eval_expr(cond, env)?.truthy() {
                    self.eval_expr(then, env)?
                } else {
                    self.eval_expr(otherwise, env)?
                }
            }
        })
    }

    /// Evaluates a non-short-circuit binary operator on evaluated operands.
    pub fn binary(&mut self, op: BinaryOp, l: &Value, r: &Value) -> RtResult<Value> {
        let num = |f: fn(f64, f64) -> f64| Value::Number(f(l.to_number(), r.to_number()));
        Ok(match op {
            BinaryOp::Add => {
                if matches!(l, Value::Str(_) | Value::Ref(_))
                    || matches!(r, Value::Str(_) | Value::Ref(_))
                {
                    let mut s = self.render(l);
                    s.push_str(&self.render(r));
                    Value::str(&s)
                } else {
                    num(|a, b| a + b)
                }
            }
            BinaryOp::Sub => num(|a, b| a - b),
            BinaryOp::Mul => num(|a, b| a * b),
            BinaryOp::Div => num(|a, b| a / b),
            BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => {
                let ord = match (l, r) {
                    (Value::Str(a), Value::Str(b)) => Some(a.cmp(b)),
                    _ => l.to_number().partial_cmp(&r.to_number()),
                };
                let result = ord.is_some_and(|o| match op {
                    BinaryOp::Lt => o.is_lt(),
                    BinaryOp::Le => o.is_le(),
                    BinaryOp::Gt => o.is_gt(),
                    _ => o.is_ge(),
                });
                Value::Boolean(result)
            }
            BinaryOp::LooseEq => Value::Boolean(self.loose_equals(l, r)?),
            BinaryOp::LooseNe => Value::Boolean(!self.loose_equals(l, r)?),
            BinaryOp::StrictEq => Value::Boolean(self.strict_equals(l, r)?),
            BinaryOp::StrictNe => Value::Boolean(!self.strict_equals(l, r)?),
            BinaryOp::OpaqueLooseEq => Value::Boolean(self.opaque_loose_equals(l, r)),
            BinaryOp::OpaqueStrictEq => Value::Boolean(self.opaque_strict_equals(l, r)),
            BinaryOp::And | BinaryOp::Or => {
                unreachable!("short-circuit operators are evaluated lazily")
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(src: &str) -> (String, Result<Option<Value>, Error>) {
        let mut it = Interpreter::new(EqualityMode::Opaque);
        let r = it.eval_source(src);
        (it.take_output(), r)
    }

    fn output(src: &str) -> String {
        let (out, r) = run(src);
        r.unwrap();
        out
    }

    fn error_kind(src: &str) -> ErrorKind {
        run(src)
            .1
            .unwrap_err()
            .runtime_kind()
            .expect("runtime error")
    }

    #[test]
    fn print_basics() {
        assert_eq!(output("print(1 === 1);"), "true\n");
        assert_eq!(output("print(5);"), "5\n");
        assert_eq!(
            output("print('a', null, undefined, {}, 1.5);"),
            "a null undefined [object] 1.5\n"
        );
    }

    #[test]
    fn closures_and_recursion() {
        let src = "
            function counter() { var n = 0; return function() { n = n + 1; return n; }; }
            var c = counter(); c(); c();
            print(c());
            function fact(n) { if (n < 2) { return 1; } return n * fact(n - 1); }
            print(fact(10));
            print(early(2));
            function early(x) { return x + 1; }
        ";
        assert_eq!(output(src), "3\n3628800\n3\n");
    }

    #[test]
    fn identity_function() {
        let mut it = Interpreter::new(EqualityMode::Opaque);
        let f = it
            .eval_source("(function(x) { return x; });")
            .unwrap()
            .unwrap();
        assert_eq!(
            it.call_value(&f, Value::Undefined, &[Value::Number(7.0)])
                .unwrap(),
            Value::Number(7.0)
        );
        assert_eq!(
            it.call_value(&f, Value::Undefined, &[]).unwrap(),
            Value::Undefined
        );
        assert_eq!(
            it.call_value(&Value::Number(1.0), Value::Undefined, &[])
                .unwrap_err()
                .kind,
            ErrorKind::TypeError
        );
    }

    #[test]
    fn while_and_strings() {
        let src =
            "var i = 0; var s = ''; while (i < 3) { s = s + i; i = i + 1; } print(s, 'x' + 1 + 2);";
        assert_eq!(output(src), "012 x12\n");
    }

    #[test]
    fn logical_and_conditional() {
        assert_eq!(
            output("print(0 || 'a', 1 && 2, null && x, true ? 1 : 2, !0, -'3');"),
            "a 2 null 1 true -3\n"
        );
    }

    #[test]
    fn method_calls_bind_this() {
        let src = "var o = {n: 4, get: function() { return this.n; }}; print(o.get(), o['get']());";
        assert_eq!(output(src), "4 4\n");
    }

    #[test]
    fn runtime_errors() {
        assert_eq!(error_kind("print(missing);"), ErrorKind::ReferenceError);
        assert_eq!(error_kind("missing = 1;"), ErrorKind::ReferenceError);
        assert_eq!(error_kind("var o = {}; o.f();"), ErrorKind::TypeError);
        assert_eq!(error_kind("var x = null; x.y;"), ErrorKind::TypeError);
        assert_eq!(error_kind("Proxy({}, {});"), ErrorKind::TypeError);
        assert_eq!(
            error_kind("contractViolation('no');"),
            ErrorKind::ContractViolation
        );
    }

    #[test]
    fn errors_carry_the_offending_line() {
        let (_, r) = run("var a = 1;\nvar b = 2;\nprint(a +\n  nope);");
        let Err(Error::Runtime(e)) = r else { panic!() };
        assert_eq!(e.line, Some(4));
        let (_, r) = run("function f() {\n  return g();\n}\nf();");
        let Err(Error::Runtime(e)) = r else { panic!() };
        assert_eq!(e.line, Some(2));
    }

    fn depth_probe(n: usize) -> Result<Option<Value>, Error> {
        let mut it = Interpreter::new(EqualityMode::Opaque);
        let src =
            format!("function f(n) {{ if (n > 0) {{ return f(n - 1); }} return 0; }} f({n});");
        let r = it.eval_source(&src);
        assert_eq!(it.call_depth(), 0);
        r
    }

    #[test]
    fn deep_recursion_overflows() {
        let err = depth_probe(2000).unwrap_err();
        assert_eq!(err.runtime_kind(), Some(ErrorKind::StackOverflow));
    }

    /// Binary search for the deepest successful call: f(n) needs n + 1 frames.
    #[test]
    fn call_stack_limit_is_exact() {
        let (mut lo, mut hi) = (0usize, 4096usize);
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if depth_probe(mid).is_ok() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_eq!(lo + 1, MAX_CALL_DEPTH);
    }

    #[test]
    fn typeof_value_kinds() {
        let out = output(
            "print(typeofValue(1), typeofValue('s'), typeofValue(true), typeofValue(null), \
             typeofValue(undefined), typeofValue({}), typeofValue(print));\
             var t = {}; var f = function() {};\
             print(typeofValue(new Proxy(t, {})) === typeofValue(t), typeofValue(new Proxy(f, {})));",
        );
        assert_eq!(
            out,
            "number string boolean null undefined object function\ntrue function\n"
        );
    }

    #[test]
    fn proxied_function_forwards_call() {
        assert_eq!(output("var f = function(a, b) { return a + b; }; var p = new Proxy(f, {}); print(p(2, 3));"), "5\n");
    }

    #[test]
    fn user_constructors() {
        assert_eq!(
            output("function P(x) { this.x = x; } var o = new P(3); print(o.x);"),
            "3\n"
        );
        assert_eq!(error_kind("new 5;"), ErrorKind::TypeError);
    }

    #[test]
    fn last_expression_value() {
        let mut it = Interpreter::new(EqualityMode::Opaque);
        assert_eq!(
            it.eval_source("var x = 2; x + 1;").unwrap(),
            Some(Value::Number(3.0))
        );
        assert_eq!(it.eval_source("var y = 1;").unwrap(), None);
    }
}
