//! Proxy creation, trap dispatch, revocation and identity resolution.
//!
//! Identity resolution follows the `isTransparent` protocol: a proxy whose
//! handler answers true is replaced by its target, repeatedly, until an
//! ordinary object or an opaque proxy is reached. The answer a handler gives
//! can be overridden for the dynamic extent of a call with
//! [`Interpreter::with_transparency`].

use crate::error::{RtResult, RuntimeError};
use crate::interp::Interpreter;
use crate::object::HeapObject;
use crate::value::{ObjectRef, Value};

/// Internal slots of a proxy object. Target and handler are fixed at
/// construction; `revoked` only ever goes from false to true.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProxySlots {
    target: ObjectRef,
    handler: ObjectRef,
    revoked: bool,
}

impl ProxySlots {
    pub fn target(&self) -> ObjectRef {
        self.target
    }

    pub fn handler(&self) -> ObjectRef {
        self.handler
    }

    pub fn is_revoked(&self) -> bool {
        self.revoked
    }
}

/// Who decides whether a proxy is transparent.
///
/// `Handler` is the normal protocol. The two forced policies replace the
/// whole decision (overrides included) and exist to compare the trap design
/// against the fixed opaque and transparent designs on the same scripts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum TransparencyPolicy {
    #[default]
    Handler,
    /// Every proxy is opaque.
    AlwaysOpaque,
    /// Every unrevoked proxy is transparent.
    AlwaysTransparent,
}

/// Scoped `(proxy, flag)` overrides, innermost last. Keys are raw proxy
/// identities, never resolved ones.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct TransparencyOverrideStack {
    entries: Vec<(ObjectRef, bool)>,
}

impl TransparencyOverrideStack {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn push(&mut self, proxy: ObjectRef, flag: bool) {
        self.entries.push((proxy, flag));
    }

    fn truncate(&mut self, len: usize) {
        self.entries.truncate(len);
    }

    /// The innermost override for `proxy`, if any.
    pub fn lookup(&self, proxy: ObjectRef) -> Option<bool> {
        self.entries
            .iter()
            .rev()
            .find(|(p, _)| *p == proxy)
            .map(|(_, flag)| *flag)
    }
}

const RED_ZONE: usize = 128 * 1024;
const STACK_SEGMENT: usize = 2 * 1024 * 1024;

impl Interpreter {
    /// `new Proxy(target, handler)`.
    pub fn proxy_create(&mut self, target: &Value, handler: &Value) -> RtResult<ObjectRef> {
        let (Value::Ref(target), Value::Ref(handler)) = (target, handler) else {
            return Err(RuntimeError::type_error(
                "Proxy requires an object target and an object handler",
            ));
        };
        Ok(self.heap.alloc(HeapObject::Proxy(ProxySlots {
            target: *target,
            handler: *handler,
            revoked: false,
        })))
    }

    pub fn is_proxy(&self, r: ObjectRef) -> bool {
        self.heap.is_proxy(r)
    }

    pub fn proxy_slots(&self, r: ObjectRef) -> Option<ProxySlots> {
        self.heap.proxy_slots(r)
    }

    fn expect_proxy(&self, r: ObjectRef, what: &str) -> RtResult<ProxySlots> {
        self.heap
            .proxy_slots(r)
            .ok_or_else(|| RuntimeError::type_error(format!("{what}: argument is not a proxy")))
    }

    /// Detaches a proxy from its target. Revoking twice is a no-op.
    pub fn revoke(&mut self, proxy: ObjectRef) -> RtResult<()> {
        match self.heap.get_mut(proxy) {
            HeapObject::Proxy(slots) => {
                slots.revoked = true;
                Ok(())
            }
            HeapObject::Ordinary(_) => Err(RuntimeError::type_error(
                "Proxy.revoke: argument is not a proxy",
            )),
        }
    }

    /// Looks up `trap_name` on the proxy's handler. Fails if the proxy is
    /// revoked or the handler property exists but is not callable.
    fn find_trap(
        &mut self,
        proxy: ObjectRef,
        trap_name: &str,
    ) -> RtResult<(Option<Value>, ProxySlots)> {
        let slots = self.expect_proxy(proxy, trap_name)?;
        if slots.revoked {
            return Err(RuntimeError::revoked(format!(
                "cannot perform '{trap_name}' on a revoked proxy"
            )));
        }
        let handler = Value::Ref(slots.handler);
        let trap = self.internal_get(slots.handler, trap_name, &handler)?;
        match trap {
            Value::Undefined | Value::Null => Ok((None, slots)),
            Value::Ref(r) if self.heap.is_callable(r) => Ok((Some(trap), slots)),
            _ => Err(RuntimeError::type_error(format!(
                "handler trap '{trap_name}' is not a function"
            ))),
        }
    }

    /// Shared trap protocol behind every proxy internal method: if the
    /// handler defines `trap_name`, call it with `(target, ...trap_args)`
    /// and the handler as `this`; otherwise run `forward` on the target.
    pub(crate) fn dispatch_trap<A, F>(
        &mut self,
        proxy: ObjectRef,
        trap_name: &str,
        trap_args: A,
        forward: F,
    ) -> RtResult<Value>
    where
        A: FnOnce(&mut Self, Value) -> Vec<Value>,
        F: FnOnce(&mut Self, ObjectRef) -> RtResult<Value>,
    {
        stacker::maybe_grow(RED_ZONE, STACK_SEGMENT, || {
            let (trap, slots) = self.find_trap(proxy, trap_name)?;
            match trap {
                Some(trap) => {
                    let mut args = vec![Value::Ref(slots.target)];
                    args.extend(trap_args(self, Value::Ref(proxy)));
                    self.call_value(&trap, Value::Ref(slots.handler), &args)
                }
                None => forward(self, slots.target),
            }
        })
    }

    /// Applies the operation named by `trap_name` to a proxy, as if the
    /// script had performed it: the trap runs when present, the operation
    /// is forwarded to the target otherwise.
    ///
    /// Argument shapes: `get(key[, receiver])`, `set(key, value[, receiver])`,
    /// `has(key)`, `deleteProperty(key)`, `ownKeys()`,
    /// `apply(thisArg, argsArrayLike)`, `isTransparent()`.
    pub fn trap_dispatch(
        &mut self,
        proxy: ObjectRef,
        trap_name: &str,
        args: &[Value],
    ) -> RtResult<Value> {
        self.expect_proxy(proxy, trap_name)?;
        let arg = |i: usize| args.get(i).cloned().unwrap_or(Value::Undefined);
        let key = |i: usize| crate::object::to_property_key(&arg(i));
        let this_proxy = Value::Ref(proxy);
        match trap_name {
            "get" => {
                let receiver = args.get(1).cloned().unwrap_or(this_proxy);
                self.internal_get(proxy, &key(0)?, &receiver)
            }
            "set" => {
                let receiver = args.get(2).cloned().unwrap_or(this_proxy);
                self.internal_set(proxy, &key(0)?, arg(1), &receiver)?;
                Ok(Value::Undefined)
            }
            "has" => self.internal_has(proxy, &key(0)?).map(Value::Boolean),
            "deleteProperty" => self.internal_delete(proxy, &key(0)?).map(Value::Boolean),
            "ownKeys" => {
                let keys = self.internal_own_keys(proxy)?;
                let items = keys.iter().map(|k| Value::str(k)).collect();
                Ok(Value::Ref(self.alloc_array(items)))
            }
            "apply" => {
                let call_args = self.array_to_vec(&arg(1))?;
                self.internal_call(proxy, arg(0), &call_args)
            }
            "isTransparent" => self.is_transparent(proxy).map(Value::Boolean),
            other => Err(RuntimeError::type_error(format!("unknown trap '{other}'"))),
        }
    }

    /// Whether equality should look through `proxy` to its target.
    pub fn is_transparent(&mut self, proxy: ObjectRef) -> RtResult<bool> {
        let slots = self.expect_proxy(proxy, "isTransparent")?;
        match self.transparency_policy() {
            TransparencyPolicy::AlwaysOpaque => return Ok(false),
            TransparencyPolicy::AlwaysTransparent => return Ok(!slots.revoked),
            TransparencyPolicy::Handler => {}
        }
        if let Some(flag) = self.overrides.lookup(proxy) {
            return Ok(flag);
        }
        if slots.revoked {
            return Ok(false);
        }
        let handler = Value::Ref(slots.handler);
        match self.internal_get(slots.handler, "isTransparent", &handler)? {
            Value::Undefined | Value::Null => Ok(false),
            trap @ Value::Ref(r) if self.heap.is_callable(r) => {
                let args = [Value::Ref(slots.target), Value::Ref(proxy)];
                Ok(self.call_value(&trap, handler, &args)?.truthy())
            }
            _ => Err(RuntimeError::type_error(
                "handler trap 'isTransparent' is not a function",
            )),
        }
    }

    /// Maps a value to the representative used for identity comparisons.
    /// Primitives and ordinary objects are their own representative; a
    /// transparent proxy is replaced by the representative of its target.
    pub fn get_equality_object(&mut self, v: &Value) -> RtResult<Value> {
        let Value::Ref(mut current) = *v else {
            return Ok(v.clone());
        };
        while let Some(slots) = self.heap.proxy_slots(current) {
            if !self.is_transparent(current)? {
                break;
            }
            current = slots.target;
        }
        Ok(Value::Ref(current))
    }

    /// Resolution that sees through every proxy regardless of handlers,
    /// stopping only at revoked proxies. Never runs script code.
    pub fn resolve_all_proxies(&self, v: &Value) -> Value {
        let Value::Ref(mut current) = *v else {
            return v.clone();
        };
        while let Some(slots) = self.heap.proxy_slots(current) {
            if slots.revoked {
                break;
            }
            current = slots.target;
        }
        Value::Ref(current)
    }

    /// Calls `thunk` with `proxy`'s transparency forced to `flag`. The
    /// override is removed when the thunk returns, whether or not it fails.
    pub fn with_transparency(
        &mut self,
        proxy: ObjectRef,
        flag: bool,
        thunk: &Value,
    ) -> RtResult<Value> {
        self.expect_proxy(proxy, "Proxy.withTransparency")?;
        match thunk {
            Value::Ref(r) if self.heap.is_callable(*r) => {}
            _ => {
                return Err(RuntimeError::type_error(
                    "Proxy.withTransparency: thunk is not a function",
                ))
            }
        }
        let saved = self.overrides.len();
        self.overrides.push(proxy, flag);
        let result = self.call_value(thunk, Value::Undefined, &[]);
        self.overrides.truncate(saved);
        result
    }

    pub fn override_stack(&self) -> &TransparencyOverrideStack {
        &self.overrides
    }
}
