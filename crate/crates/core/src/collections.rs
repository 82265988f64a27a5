//! Identity-keyed map exposed to scripts as `WeakMap`.
//!
//! Keys are resolved with the interpreter's equality mode on every operation,
//! so two keys that compare `===` always address the same entry. Entries are
//! held strongly; the heap never frees objects anyway.

use std::collections::HashMap;

use crate::error::{RtResult, RuntimeError};
use crate::interp::builtins::{MapMethod, Native};
use crate::interp::Interpreter;
use crate::object::{HeapObject, OrdinaryObject};
use crate::value::{ObjectRef, Value};

#[derive(Debug, Default, Clone)]
pub struct IdentityMapData {
    entries: HashMap<ObjectRef, Value>,
}

impl IdentityMapData {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Interpreter {
    /// Allocates an empty map object carrying `set`, `get`, `has` and
    /// `delete` methods bound to it.
    pub fn idmap_create(&mut self) -> ObjectRef {
        let map = self.heap.alloc(HeapObject::Ordinary(OrdinaryObject {
            identity_map: Some(IdentityMapData::default()),
            ..OrdinaryObject::default()
        }));
        for method in MapMethod::ALL {
            let f = self.heap.alloc_native(Native::MapMethod(map, method));
            self.heap
                .ordinary_mut(map)
                .expect("fresh map object")
                .properties
                .insert(method.name().to_string(), Value::Ref(f));
        }
        map
    }

    fn idmap_key(&mut self, key: &Value) -> RtResult<ObjectRef> {
        if !key.is_object() {
            return Err(RuntimeError::type_error("WeakMap keys must be objects"));
        }
        let resolved = self.resolve_for_mode(key, self.mode())?;
        Ok(resolved.as_ref().expect("objects resolve to objects"))
    }

    fn idmap_data(&mut self, map: ObjectRef) -> RtResult<&mut IdentityMapData> {
        self.heap
            .ordinary_mut(map)
            .and_then(|o| o.identity_map.as_mut())
            .ok_or_else(|| RuntimeError::type_error("receiver is not a WeakMap"))
    }

    pub fn idmap_set(&mut self, map: ObjectRef, key: &Value, value: Value) -> RtResult<()> {
        self.idmap_data(map)?;
        let key = self.idmap_key(key)?;
        self.idmap_data(map)?.entries.insert(key, value);
        Ok(())
    }

    pub fn idmap_get(&mut self, map: ObjectRef, key: &Value) -> RtResult<Value> {
        self.idmap_data(map)?;
        let key = self.idmap_key(key)?;
        Ok(self
            .idmap_data(map)?
            .entries
            .get(&key)
            .cloned()
            .unwrap_or(Value::Undefined))
    }

    pub fn idmap_has(&mut self, map: ObjectRef, key: &Value) -> RtResult<bool> {
        self.idmap_data(map)?;
        let key = self.idmap_key(key)?;
        Ok(self.idmap_data(map)?.entries.contains_key(&key))
    }

    pub fn idmap_delete(&mut self, map: ObjectRef, key: &Value) -> RtResult<bool> {
        self.idmap_data(map)?;
        let key = self.idmap_key(key)?;
        Ok(self.idmap_data(map)?.entries.remove(&key).is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equality::EqualityMode;
    use crate::error::ErrorKind;

    fn setup(mode: EqualityMode) -> (Interpreter, ObjectRef, ObjectRef, ObjectRef) {
        let mut it = Interpreter::new(mode);
        let t = it.alloc_object([]);
        let h = it
            .eval_source("({isTransparent: function() { return true; }});")
            .unwrap()
            .unwrap();
        let p = it.proxy_create(&Value::Ref(t), &h).unwrap();
        let m = it.idmap_create();
        (it, m, t, p)
    }

    #[test]
    fn fresh_maps() {
        let (mut it, m, t, _) = setup(EqualityMode::Opaque);
        assert!(!it.idmap_has(m, &Value::Ref(t)).unwrap());
        let m2 = it.idmap_create();
        assert_ne!(m, m2);
        // a map is an ordinary object value
        let holder = it.alloc_object([]);
        it.internal_set(holder, "m", Value::Ref(m), &Value::Undefined)
            .unwrap();
        assert_eq!(
            it.internal_get(holder, "m", &Value::Undefined).unwrap(),
            Value::Ref(m)
        );
    }

    #[test]
    fn set_get_delete() {
        let (mut it, m, t, _) = setup(EqualityMode::Opaque);
        it.idmap_set(m, &Value::Ref(t), Value::Number(42.0))
            .unwrap();
        assert_eq!(
            it.idmap_get(m, &Value::Ref(t)).unwrap(),
            Value::Number(42.0)
        );
        it.idmap_set(m, &Value::Ref(t), Value::Number(43.0))
            .unwrap();
        assert_eq!(
            it.idmap_get(m, &Value::Ref(t)).unwrap(),
            Value::Number(43.0)
        );
        assert!(it.idmap_delete(m, &Value::Ref(t)).unwrap());
        assert!(!it.idmap_has(m, &Value::Ref(t)).unwrap());
        assert!(!it.idmap_delete(m, &Value::Ref(t)).unwrap());
    }

    #[test]
    fn keys_resolve_per_mode() {
        let (mut it, m, t, p) = setup(EqualityMode::Trap);
        it.idmap_set(m, &Value::Ref(t), Value::Number(42.0))
            .unwrap();
        assert_eq!(
            it.idmap_get(m, &Value::Ref(p)).unwrap(),
            Value::Number(42.0)
        );

        let (mut it, m, t, p) = setup(EqualityMode::Opaque);
        it.idmap_set(m, &Value::Ref(t), Value::Number(42.0))
            .unwrap();
        assert_eq!(it.idmap_get(m, &Value::Ref(p)).unwrap(), Value::Undefined);
    }

    #[test]
    fn primitive_keys_rejected() {
        let (mut it, m, _, _) = setup(EqualityMode::Trap);
        for key in [Value::Number(1.0), Value::str("k"), Value::Null] {
            let err = it.idmap_set(m, &key, Value::Null).unwrap_err();
            assert_eq!(err.kind, ErrorKind::TypeError);
            assert_eq!(
                it.idmap_get(m, &key).unwrap_err().kind,
                ErrorKind::TypeError
            );
        }
        let not_map = it.alloc_object([]);
        assert!(it.idmap_get(not_map, &Value::Ref(not_map)).is_err());
    }
}
