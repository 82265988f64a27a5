//! The heap and the internal methods shared by every object.
//!
//! Ordinary objects answer the internal methods from their own property
//! table. Proxies route every method through their handler, forwarding to
//! the target when the corresponding trap is absent.

use std::rc::Rc;

use indexmap::IndexMap;

use crate::collections::IdentityMapData;
use crate::error::{RtResult, RuntimeError};
use crate::frontend::ast::FunctionDef;
use crate::interp::builtins::Native;
use crate::interp::env::Env;
use crate::interp::Interpreter;
use crate::proxy::ProxySlots;
use crate::value::{number_to_string, ObjectRef, Value};

/// A script function together with the scope it closes over.
#[derive(Debug)]
pub struct Closure {
    pub def: Rc<FunctionDef>,
    pub env: Env,
}

#[derive(Debug, Clone)]
pub enum Callable {
    Script(Rc<Closure>),
    Native(Native),
}

#[derive(Debug, Default)]
pub struct OrdinaryObject {
    pub properties: IndexMap<String, Value>,
    pub callable: Option<Callable>,
    pub(crate) identity_map: Option<IdentityMapData>,
}

#[derive(Debug)]
pub enum HeapObject {
    Ordinary(OrdinaryObject),
    Proxy(ProxySlots),
}

/// Append-only object store. Slots are never freed, so every `ObjectRef`
/// handed out stays valid for the life of the heap.
#[derive(Debug, Default)]
pub struct Heap {
    objects: Vec<HeapObject>,
}

impl Heap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn alloc(&mut self, object: HeapObject) -> ObjectRef {
        let index = u32::try_from(self.objects.len()).expect("heap exhausted");
        self.objects.push(object);
        ObjectRef(index)
    }

    /// Allocates an ordinary object with the given properties, in order.
    /// A repeated key keeps its first position and its last value.
    pub fn alloc_object<I>(&mut self, properties: I) -> ObjectRef
    where
        I: IntoIterator<Item = (String, Value)>,
    {
        self.alloc(HeapObject::Ordinary(OrdinaryObject {
            properties: properties.into_iter().collect(),
            ..OrdinaryObject::default()
        }))
    }

    pub fn alloc_native(&mut self, native: Native) -> ObjectRef {
        self.alloc(HeapObject::Ordinary(OrdinaryObject {
            callable: Some(Callable::Native(native)),
            ..OrdinaryObject::default()
        }))
    }

    pub fn get(&self, r: ObjectRef) -> &HeapObject {
        &self.objects[r.index()]
    }

    pub fn get_mut(&mut self, r: ObjectRef) -> &mut HeapObject {
        &mut self.objects[r.index()]
    }

    pub fn ordinary(&self, r: ObjectRef) -> Option<&OrdinaryObject> {
        match self.get(r) {
            HeapObject::Ordinary(o) => Some(o),
            HeapObject::Proxy(_) => None,
        }
    }

    pub fn ordinary_mut(&mut self, r: ObjectRef) -> Option<&mut OrdinaryObject> {
        match self.get_mut(r) {
            HeapObject::Ordinary(o) => Some(o),
            HeapObject::Proxy(_) => None,
        }
    }

    pub fn proxy_slots(&self, r: ObjectRef) -> Option<ProxySlots> {
        match self.get(r) {
            HeapObject::Proxy(slots) => Some(*slots),
            HeapObject::Ordinary(_) => None,
        }
    }

    pub fn is_proxy(&self, r: ObjectRef) -> bool {
        matches!(self.get(r), HeapObject::Proxy(_))
    }

    /// Callability of a proxy is that of the object at the end of its
    /// target chain, so proxies report the same kind as what they wrap.
    pub fn is_callable(&self, mut r: ObjectRef) -> bool {
        loop {
            match self.get(r) {
                HeapObject::Ordinary(o) => return o.callable.is_some(),
                HeapObject::Proxy(slots) => r = slots.target(),
            }
        }
    }
}

/// Converts a value used as a computed property key into its string form.
pub fn to_property_key(key: &Value) -> RtResult<String> {
    match key {
        Value::Str(s) => Ok(s.to_string()),
        Value::Number(n) => Ok(number_to_string(*n)),
        Value::Boolean(b) => Ok(b.to_string()),
        Value::Null => Ok("null".into()),
        Value::Undefined => Ok("undefined".into()),
        Value::Ref(_) => Err(RuntimeError::type_error(
            "objects cannot be used as property keys",
        )),
    }
}

impl Interpreter {
    pub fn alloc_object<I>(&mut self, properties: I) -> ObjectRef
    where
        I: IntoIterator<Item = (String, Value)>,
    {
        self.heap.alloc_object(properties)
    }

    /// Builds an array-like object: keys "0".."n-1" plus `length`.
    pub fn alloc_array(&mut self, items: Vec<Value>) -> ObjectRef {
        let len = items.len();
        let props = items
            .into_iter()
            .enumerate()
            .map(|(i, v)| (i.to_string(), v))
            .chain(std::iter::once((
                "length".to_string(),
                Value::Number(len as f64),
            )));
        self.heap.alloc_object(props)
    }

    /// Reads an array-like value back into a vector, honoring traps.
    /// `undefined` and `null` read as the empty list.
    pub fn array_to_vec(&mut self, v: &Value) -> RtResult<Vec<Value>> {
        let r = match v {
            Value::Ref(r) => *r,
            Value::Undefined | Value::Null => return Ok(Vec::new()),
            _ => return Err(RuntimeError::type_error("expected an array-like object")),
        };
        let len = self.internal_get(r, "length", v)?.to_number();
        if !(len.is_finite() && len >= 0.0) {
            return Err(RuntimeError::type_error("array-like length is not a count"));
        }
        (0..len as usize)
            .map(|i| self.internal_get(r, &i.to_string(), v))
            .collect()
    }

    pub fn internal_get(&mut self, obj: ObjectRef, key: &str, receiver: &Value) -> RtResult<Value> {
        match self.heap.get(obj) {
            HeapObject::Ordinary(o) => {
                Ok(o.properties.get(key).cloned().unwrap_or(Value::Undefined))
            }
            HeapObject::Proxy(_) => {
                let receiver = receiver.clone();
                self.dispatch_trap(
                    obj,
                    "get",
                    |_, _| vec![Value::str(key), receiver.clone()],
                    |me, target| me.internal_get(target, key, &receiver),
                )
            }
        }
    }

    pub fn internal_set(
        &mut self,
        obj: ObjectRef,
        key: &str,
        value: Value,
        receiver: &Value,
    ) -> RtResult<()> {
        match self.heap.get_mut(obj) {
            HeapObject::Ordinary(o) => {
                o.properties.insert(key.to_string(), value);
                Ok(())
            }
            HeapObject::Proxy(_) => {
                let receiver = receiver.clone();
                self.dispatch_trap(
                    obj,
                    "set",
                    |_, _| vec![Value::str(key), value.clone(), receiver.clone()],
                    |me, target| {
                        me.internal_set(target, key, value.clone(), &receiver)
                            .map(|()| Value::Undefined)
                    },
                )
                .map(|_| ())
            }
        }
    }

    pub fn internal_has(&mut self, obj: ObjectRef, key: &str) -> RtResult<bool> {
        match self.heap.get(obj) {
            HeapObject::Ordinary(o) => Ok(o.properties.contains_key(key)),
            HeapObject::Proxy(_) => self
                .dispatch_trap(
                    obj,
                    "has",
                    |_, proxy| vec![Value::str(key), proxy],
                    |me, target| me.internal_has(target, key).map(Value::Boolean),
                )
                .map(|v| v.truthy()),
        }
    }

    pub fn internal_delete(&mut self, obj: ObjectRef, key: &str) -> RtResult<bool> {
        match self.heap.get_mut(obj) {
            HeapObject::Ordinary(o) => Ok(o.properties.shift_remove(key).is_some()),
            HeapObject::Proxy(_) => self
                .dispatch_trap(
                    obj,
                    "deleteProperty",
                    |_, proxy| vec![Value::str(key), proxy],
                    |me, target| me.internal_delete(target, key).map(Value::Boolean),
                )
                .map(|v| v.truthy()),
        }
    }

    pub fn internal_own_keys(&mut self, obj: ObjectRef) -> RtResult<Vec<String>> {
        match self.heap.get(obj) {
            HeapObject::Ordinary(o) => Ok(o.properties.keys().cloned().collect()),
            HeapObject::Proxy(_) => {
                let listed = self.dispatch_trap(
                    obj,
                    "ownKeys",
                    |_, proxy| vec![proxy],
                    |me, target| {
                        let keys = me.internal_own_keys(target)?;
                        let items = keys.iter().map(|k| Value::str(k)).collect();
                        Ok(Value::Ref(me.alloc_array(items)))
                    },
                )?;
                self.array_to_vec(&listed)?
                    .iter()
                    .map(to_property_key)
                    .collect()
            }
        }
    }

    pub fn internal_call(
        &mut self,
        obj: ObjectRef,
        this: Value,
        args: &[Value],
    ) -> RtResult<Value> {
        match self.heap.get(obj) {
            HeapObject::Ordinary(o) => match o.callable.clone() {
                Some(Callable::Script(closure)) => self.call_closure(obj, &closure, this, args),
                Some(Callable::Native(native)) => self.call_native(native, this, args),
                None => Err(RuntimeError::type_error("object is not callable")),
            },
            HeapObject::Proxy(slots) => {
                if !slots.is_revoked() && !self.heap.is_callable(obj) {
                    return Err(RuntimeError::type_error("proxy target is not callable"));
                }
                self.dispatch_trap(
                    obj,
                    "apply",
                    |me, proxy| {
                        let list = me.alloc_array(args.to_vec());
                        vec![this.clone(), Value::Ref(list), proxy]
                    },
                    |me, target| me.internal_call(target, this.clone(), args),
                )
            }
        }
    }
}
