//! Lexical scopes.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use crate::value::Value;

struct Scope {
    vars: HashMap<String, Value>,
    parent: Option<Env>,
}

/// A shared handle to a scope; cloning shares the scope.
#[derive(Clone)]
pub struct Env(Rc<RefCell<Scope>>);

impl fmt::Debug for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scope = self.0.borrow();
        let mut names: Vec<_> = scope.vars.keys().collect();
        names.sort();
        f.debug_struct("Env")
            .field("names", &names)
            .field("has_parent", &scope.parent.is_some())
            .finish()
    }
}

impl Env {
    pub fn global() -> Self {
        Env(Rc::new(RefCell::new(Scope {
            vars: HashMap::new(),
            parent: None,
        })))
    }

    pub fn child(&self) -> Self {
        Env(Rc::new(RefCell::new(Scope {
            vars: HashMap::new(),
            parent: Some(self.clone()),
        })))
    }

    /// Binds `name` in this scope, replacing any existing binding here.
    pub fn declare(&self, name: &str, value: Value) {
        self.0.borrow_mut().vars.insert(name.to_string(), value);
    }

    pub fn lookup(&self, name: &str) -> Option<Value> {
        let mut current = self.clone();
        loop {
            let next = {
                let scope = current.0.borrow();
                if let Some(v) = scope.vars.get(name) {
                    return Some(v.clone());
                }
                scope.parent.clone()?
            };
            current = next;
        }
    }

    /// Updates the nearest binding of `name`. Returns false if undeclared.
    pub fn assign(&self, name: &str, value: Value) -> bool {
        let mut current = self.clone();
        loop {
            let next = {
                let mut scope = current.0.borrow_mut();
                if let Some(slot) = scope.vars.get_mut(name) {
                    *slot = value;
                    return true;
                }
                match scope.parent.clone() {
                    Some(p) => p,
                    None => return false,
                }
            };
            current = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_and_assign_walk_parents() {
        let g = Env::global();
        g.declare("x", Value::Number(1.0));
        let c = g.child();
        assert_eq!(c.lookup("x"), Some(Value::Number(1.0)));
        assert!(c.assign("x", Value::Number(2.0)));
        assert_eq!(g.lookup("x"), Some(Value::Number(2.0)));
        c.declare("x", Value::Number(3.0));
        assert_eq!(c.lookup("x"), Some(Value::Number(3.0)));
        assert_eq!(g.lookup("x"), Some(Value::Number(2.0)));
        assert!(!c.assign("nope", Value::Null));
        assert_eq!(c.lookup("nope"), None);
    }
}
