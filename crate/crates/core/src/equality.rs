//! Equality operators and the proxy-aware equality builtins.
//!
//! Every comparison first maps both operands to identity representatives
//! according to an [`EqualityMode`], then compares the representatives.
//! Handlers never compute the boolean result; at most they influence which
//! representative stands for a proxy.

use std::fmt;
use std::str::FromStr;

use crate::error::RtResult;
use crate::interp::Interpreter;
use crate::value::Value;

/// How `==` and `===` treat proxies. Fixed for the life of an interpreter.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum EqualityMode {
    /// Raw reference identity: every proxy is distinct from its target.
    #[default]
    Opaque,
    /// Every proxy compares as its (unrevoked) target, recursively.
    Transparent,
    /// As `Transparent`, with `:==:`/`:===:` available for raw identity.
    Operators,
    /// Per-proxy choice through the handler's `isTransparent` trap.
    Trap,
}

impl EqualityMode {
    pub const ALL: [EqualityMode; 4] = [
        EqualityMode::Opaque,
        EqualityMode::Transparent,
        EqualityMode::Operators,
        EqualityMode::Trap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EqualityMode::Opaque => "opaque",
            EqualityMode::Transparent => "transparent",
            EqualityMode::Operators => "operators",
            EqualityMode::Trap => "trap",
        }
    }
}

impl fmt::Display for EqualityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown equality mode `{0}` (expected opaque, transparent, operators or trap)")]
pub struct UnknownMode(pub String);

impl FromStr for EqualityMode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EqualityMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| UnknownMode(s.to_string()))
    }
}

/// Reference identity on objects; same type and value on primitives.
pub fn raw_identical(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Ref(x), Value::Ref(y)) => x == y,
        (Value::Number(x), Value::Number(y)) => x == y,
        (Value::Boolean(x), Value::Boolean(y)) => x == y,
        (Value::Str(x), Value::Str(y)) => x == y,
        (Value::Null, Value::Null) | (Value::Undefined, Value::Undefined) => true,
        _ => false,
    }
}

/// `==` on already-resolved operands.
///
/// Booleans convert to numbers first; a number meets a string by numeric
/// value; `null` and `undefined` equal each other and nothing else. An object
/// never equals a primitive since objects have no primitive conversion here.
pub fn loose_equals_resolved(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Ref(_), Value::Ref(_)) => raw_identical(a, b),
        (Value::Ref(_), _) | (_, Value::Ref(_)) => false,
        (Value::Null | Value::Undefined, Value::Null | Value::Undefined) => true,
        (Value::Null | Value::Undefined, _) | (_, Value::Null | Value::Undefined) => false,
        (Value::Boolean(x), _) => loose_equals_resolved(&Value::Number(f64::from(u8::from(*x))), b),
        (_, Value::Boolean(y)) => loose_equals_resolved(a, &Value::Number(f64::from(u8::from(*y)))),
        (Value::Number(_), Value::Str(_)) | (Value::Str(_), Value::Number(_)) => {
            a.to_number() == b.to_number()
        }
        _ => raw_identical(a, b),
    }
}

impl Interpreter {
    /// Maps `v` to its identity representative under `mode`.
    pub fn resolve_for_mode(&mut self, v: &Value, mode: EqualityMode) -> RtResult<Value> {
        match mode {
            EqualityMode::Opaque => Ok(v.clone()),
            EqualityMode::Transparent | EqualityMode::Operators => Ok(self.resolve_all_proxies(v)),
            EqualityMode::Trap => self.get_equality_object(v),
        }
    }

    fn resolve_pair(
        &mut self,
        a: &Value,
        b: &Value,
        mode: EqualityMode,
    ) -> RtResult<(Value, Value)> {
        Ok((
            self.resolve_for_mode(a, mode)?,
            self.resolve_for_mode(b, mode)?,
        ))
    }

    pub fn strict_equals_in(&mut self, a: &Value, b: &Value, mode: EqualityMode) -> RtResult<bool> {
        let (a, b) = self.resolve_pair(a, b, mode)?;
        Ok(raw_identical(&a, &b))
    }

    pub fn loose_equals_in(&mut self, a: &Value, b: &Value, mode: EqualityMode) -> RtResult<bool> {
        let (a, b) = self.resolve_pair(a, b, mode)?;
        Ok(loose_equals_resolved(&a, &b))
    }

    /// `===` under the interpreter's mode.
    pub fn strict_equals(&mut self, a: &Value, b: &Value) -> RtResult<bool> {
        self.strict_equals_in(a, b, self.mode())
    }

    /// `==` under the interpreter's mode.
    pub fn loose_equals(&mut self, a: &Value, b: &Value) -> RtResult<bool> {
        self.loose_equals_in(a, b, self.mode())
    }

    /// `:===:`, raw identity in every mode.
    pub fn opaque_strict_equals(&self, a: &Value, b: &Value) -> bool {
        raw_identical(a, b)
    }

    /// `:==:`, `==` without any proxy resolution.
    pub fn opaque_loose_equals(&self, a: &Value, b: &Value) -> bool {
        loose_equals_resolved(a, b)
    }

    /// `Proxy.isIdentical`: `===` through all proxies, ignoring handlers.
    pub fn builtin_is_identical(&self, a: &Value, b: &Value) -> bool {
        raw_identical(&self.resolve_all_proxies(a), &self.resolve_all_proxies(b))
    }

    /// `Proxy.isEqual`: `==` through all proxies, ignoring handlers.
    pub fn builtin_is_equal(&self, a: &Value, b: &Value) -> bool {
        loose_equals_resolved(&self.resolve_all_proxies(a), &self.resolve_all_proxies(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::ObjectRef;
    use proptest::prelude::*;

    #[test]
    fn raw_identity() {
        let t = Value::Ref(ObjectRef(3));
        assert!(raw_identical(&t, &t));
        assert!(!raw_identical(&t, &Value::Ref(ObjectRef(4))));
        assert!(!raw_identical(
            &Value::Number(f64::NAN),
            &Value::Number(f64::NAN)
        ));
        assert!(raw_identical(&Value::Number(0.0), &Value::Number(-0.0)));
        assert!(raw_identical(&Value::Null, &Value::Null));
        assert!(!raw_identical(&Value::Null, &Value::Undefined));
        assert!(!raw_identical(&Value::Number(1.0), &Value::str("1")));
    }

    #[test]
    fn loose_primitive_cases() {
        assert!(loose_equals_resolved(&Value::Number(1.0), &Value::str("1")));
        assert!(loose_equals_resolved(&Value::Null, &Value::Undefined));
        assert!(!loose_equals_resolved(&Value::Null, &Value::Number(0.0)));
        assert!(!loose_equals_resolved(&Value::Null, &Value::Boolean(false)));
        assert!(loose_equals_resolved(
            &Value::Boolean(true),
            &Value::str("1")
        ));
        assert!(loose_equals_resolved(&Value::str(""), &Value::Number(0.0)));
        assert!(!loose_equals_resolved(&Value::str(""), &Value::str("0")));
        assert!(!loose_equals_resolved(
            &Value::Ref(ObjectRef(0)),
            &Value::str("[object]")
        ));
    }

    #[test]
    fn mode_names_round_trip() {
        for m in EqualityMode::ALL {
            assert_eq!(m.name().parse::<EqualityMode>().unwrap(), m);
        }
        assert!("Trap".parse::<EqualityMode>().is_err());
        assert!("".parse::<EqualityMode>().is_err());
    }

    fn primitive() -> impl Strategy<Value = Value> {
        prop_oneof![
            any::<f64>().prop_map(Value::Number),
            prop::sample::select(vec![0.0, -0.0, 1.0, f64::NAN, 2.5]).prop_map(Value::Number),
            any::<bool>().prop_map(Value::Boolean),
            prop::sample::select(vec!["", "0", "1", " 1 ", "abc", "2.5"]).prop_map(Value::str),
            Just(Value::Null),
            Just(Value::Undefined),
        ]
    }

    proptest! {
        #[test]
        fn loose_is_symmetric(a in primitive(), b in primitive()) {
            prop_assert_eq!(loose_equals_resolved(&a, &b), loose_equals_resolved(&b, &a));
        }

        #[test]
        fn strict_implies_loose(a in primitive(), b in primitive()) {
            if raw_identical(&a, &b) {
                prop_assert!(loose_equals_resolved(&a, &b));
            }
        }
    }
}
