//! Native functions bound into the global scope.

use crate::error::{ErrorKind, RtResult, RuntimeError};
use crate::object::to_property_key;
use crate::value::{ObjectRef, Value};

use super::Interpreter;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapMethod {
    Set,
    Get,
    Has,
    Delete,
}

impl MapMethod {
    pub const ALL: [MapMethod; 4] = [
        MapMethod::Set,
        MapMethod::Get,
        MapMethod::Has,
        MapMethod::Delete,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MapMethod::Set => "set",
            MapMethod::Get => "get",
            MapMethod::Has => "has",
            MapMethod::Delete => "delete",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Native {
    Print,
    TypeofValue,
    ProxyConstructor,
    ProxyRevoke,
    ProxyIsEqual,
    ProxyIsIdentical,
    ProxyWithTransparency,
    WeakMapFactory,
    MapMethod(ObjectRef, MapMethod),
    ReflectApply,
    ReflectOwnKeys,
    ReflectHas,
    ReflectDeleteProperty,
    ContractViolation,
}

fn arg(args: &[Value], i: usize) -> Value {
    args.get(i).cloned().unwrap_or(Value::Undefined)
}

fn object_arg(args: &[Value], i: usize, what: &str) -> RtResult<ObjectRef> {
    arg(args, i).as_ref().ok_or_else(|| {
        RuntimeError::type_error(format!("{what}: argument {} must be an object", i + 1))
    })
}

impl Interpreter {
    pub(crate) fn bind_builtins(&mut self) {
        let print = self.heap.alloc_native(Native::Print);
        self.define_global("print", Value::Ref(print));
        let typeof_value = self.heap.alloc_native(Native::TypeofValue);
        self.define_global("typeofValue", Value::Ref(typeof_value));

        let proxy = self.heap.alloc_native(Native::ProxyConstructor);
        for (name, native) in [
            ("isEqual", Native::ProxyIsEqual),
            ("isIdentical", Native::ProxyIsIdentical),
            ("revoke", Native::ProxyRevoke),
            ("withTransparency", Native::ProxyWithTransparency),
        ] {
            let f = self.heap.alloc_native(native);
            self.set_own(proxy, name, Value::Ref(f));
        }
        self.define_global("Proxy", Value::Ref(proxy));

        let weak_map = self.heap.alloc_native(Native::WeakMapFactory);
        self.define_global("WeakMap", Value::Ref(weak_map));

        let reflect = self.heap.alloc_object([]);
        for (name, native) in [
            ("apply", Native::ReflectApply),
            ("ownKeys", Native::ReflectOwnKeys),
            ("has", Native::ReflectHas),
            ("deleteProperty", Native::ReflectDeleteProperty),
        ] {
            let f = self.heap.alloc_native(native);
            self.set_own(reflect, name, Value::Ref(f));
        }
        self.define_global("Reflect", Value::Ref(reflect));

        let violation = self.heap.alloc_native(Native::ContractViolation);
        self.define_global("contractViolation", Value::Ref(violation));
    }

    fn set_own(&mut self, obj: ObjectRef, key: &str, value: Value) {
        self.heap
            .ordinary_mut(obj)
            .expect("builtin namespace objects are ordinary")
            .properties
            .insert(key.to_string(), value);
    }

    /// Kind string of a value. Proxies report the kind of what they wrap.
    pub fn typeof_value(&self, v: &Value) -> &'static str {
        match v {
            Value::Ref(r) if self.heap.is_callable(*r) => "function",
            other => other.type_tag(),
        }
    }

    pub(crate) fn call_native(
        &mut self,
        native: Native,
        _this: Value,
        args: &[Value],
    ) -> RtResult<Value> {
        match native {
            Native::Print => {
                let line: Vec<String> = args.iter().map(|v| self.render(v)).collect();
                self.write_output(&line.join(" "));
                Ok(Value::Undefined)
            }
            Native::TypeofValue => Ok(Value::str(self.typeof_value(&arg(args, 0)))),
            Native::ProxyConstructor => {
                Err(RuntimeError::type_error("Proxy must be called with `new`"))
            }
            Native::ProxyRevoke => {
                let p = object_arg(args, 0, "Proxy.revoke")?;
                self.revoke(p)?;
                Ok(Value::Undefined)
            }
            Native::ProxyIsEqual => Ok(Value::Boolean(
                self.builtin_is_equal(&arg(args, 0), &arg(args, 1)),
            )),
            Native::ProxyIsIdentical => Ok(Value::Boolean(
                self.builtin_is_identical(&arg(args, 0), &arg(args, 1)),
            )),
            Native::ProxyWithTransparency => {
                let p = object_arg(args, 0, "Proxy.withTransparency")?;
                self.with_transparency(p, arg(args, 1).truthy(), &arg(args, 2))
            }
            Native::WeakMapFactory => Ok(Value::Ref(self.idmap_create())),
            Native::MapMethod(map, method) => match method {
                MapMethod::Set => {
                    self.idmap_set(map, &arg(args, 0), arg(args, 1))?;
                    Ok(Value::Ref(map))
                }
                MapMethod::Get => self.idmap_get(map, &arg(args, 0)),
                MapMethod::Has => self.idmap_has(map, &arg(args, 0)).map(Value::Boolean),
                MapMethod::Delete => self.idmap_delete(map, &arg(args, 0)).map(Value::Boolean),
            },
            Native::ReflectApply => {
                let list = self.array_to_vec(&arg(args, 2))?;
                self.call_value(&arg(args, 0), arg(args, 1), &list)
            }
            Native::ReflectOwnKeys => {
                let o = object_arg(args, 0, "Reflect.ownKeys")?;
                let keys = self.internal_own_keys(o)?;
                let items = keys.iter().map(|k| Value::str(k)).collect();
                Ok(Value::Ref(self.alloc_array(items)))
            }
            Native::ReflectHas => {
                let o = object_arg(args, 0, "Reflect.has")?;
                let key = to_property_key(&arg(args, 1))?;
                self.internal_has(o, &key).map(Value::Boolean)
            }
            Native::ReflectDeleteProperty => {
                let o = object_arg(args, 0, "Reflect.deleteProperty")?;
                let key = to_property_key(&arg(args, 1))?;
                self.internal_delete(o, &key).map(Value::Boolean)
            }
            Native::ContractViolation => Err(RuntimeError::new(
                ErrorKind::ContractViolation,
                self.render(&arg(args, 0)),
            )),
        }
    }

    /// Construction through `new`.
    pub(crate) fn construct(&mut self, callee: &Value, args: &[Value]) -> RtResult<Value> {
        let Value::Ref(r) = callee else {
            return Err(RuntimeError::type_error("value is not a constructor"));
        };
        if let Some(slots) = self.heap.proxy_slots(*r) {
            if slots.is_revoked() {
                return Err(RuntimeError::revoked(
                    "cannot construct through a revoked proxy",
                ));
            }
            return self.construct(&Value::Ref(slots.target()), args);
        }
        let callable = self.heap.ordinary(*r).and_then(|o| o.callable.clone());
        match callable {
            Some(crate::object::Callable::Native(Native::ProxyConstructor)) => {
                Ok(Value::Ref(self.proxy_create(&arg(args, 0), &arg(args, 1))?))
            }
            Some(crate::object::Callable::Native(Native::WeakMapFactory)) => {
                Ok(Value::Ref(self.idmap_create()))
            }
            Some(crate::object::Callable::Script(closure)) => {
                let fresh = Value::Ref(self.heap.alloc_object([]));
                let result = self.call_closure(*r, &closure, fresh.clone(), args)?;
                Ok(if result.is_object() { result } else { fresh })
            }
            _ => Err(RuntimeError::type_error("value is not a constructor")),
        }
    }
}
