"""Host class registry: a reflection layer over plain Python state.

Classes and interfaces are described by descriptors (fields, methods,
constructors, single base class) and registered while the registry is
open.  freeze() then validates every type reference, flattens members
over base chains (derived entries shadow base entries with the same
signature), and enables lookups.  After freeze the registry structure is
immutable; only instance fields, static field values and array elements
change.

Method bodies are native Python callables.  Instance bodies receive the
HostObject as their first argument, static bodies receive the declared
parameters only.  Host values are Python values: int, float, str, bool,
None, HostObject, HostArray, or an inbound wrapper for interface and
class typed slots.
"""

import inspect
import itertools
from dataclasses import dataclass, field as dc_field

from .errors import (
    Ambiguous,
    BridgeScriptError,
    ClassNotFound,
    DescriptorError,
    DuplicateClass,
    FieldMethodNameCollision,
    HostException,
    IndexOutOfBounds,
    InterfaceNotInstantiable,
    NoMatch,
    NoSuchField,
    NoSuchMember,
    NotFrozen,
    RegistryFrozen,
    TypeMismatch,
    UnknownBase,
)

_uid = itertools.count(1).__next__


# ------------------------------------------------------------------ type tags

class PrimTag:
    __slots__ = ("kind",)

    def __init__(self, kind: str):
        self.kind = kind

    def __repr__(self) -> str:
        return self.kind


BOOLEAN = PrimTag("boolean")
INTEGER = PrimTag("integer")
FLOAT = PrimTag("float")
TEXT = PrimTag("text")
VOID = PrimTag("void")


@dataclass(frozen=True)
class ClassTag:
    name: str

    def __repr__(self) -> str:
        return f"class:{self.name}"


@dataclass(frozen=True)
class InterfaceTag:
    name: str

    def __repr__(self) -> str:
        return f"interface:{self.name}"


@dataclass(frozen=True)
class ArrayTag:
    elem: object

    def __repr__(self) -> str:
        return f"array:{self.elem!r}"


def zero_value(tag):
    """Default slot value per tag: primitive zero or a null reference."""
    if tag is INTEGER:
        return 0
    if tag is FLOAT:
        return 0.0
    if tag is TEXT:
        return ""
    if tag is BOOLEAN:
        return False
    return None


_UNSET = object()


@dataclass(frozen=True)
class FieldSpec:
    tag: object
    static: bool = False
    initial: object = _UNSET


@dataclass(frozen=True, eq=False)
class MethodDescriptor:
    name: str
    params: tuple
    returns: object
    static: bool = False
    body: object = None


@dataclass
class HostClassDescriptor:
    name: str
    kind: str = "class"  # "class" | "interface"
    base: str | None = None
    fields: dict = dc_field(default_factory=dict)        # name -> FieldSpec
    methods: dict = dc_field(default_factory=dict)       # name -> [MethodDescriptor]
    constructors: list = dc_field(default_factory=list)  # [MethodDescriptor]


class HostObject:
    __slots__ = ("class_name", "fields", "uid", "__weakref__")

    def __init__(self, class_name: str, fields: dict):
        self.class_name = class_name
        self.fields = fields
        self.uid = _uid()

    def __repr__(self) -> str:
        return f"{self.class_name}#{self.uid}"


class HostArray:
    __slots__ = ("elem_tag", "elements", "uid", "__weakref__")

    def __init__(self, elem_tag, elements: list):
        self.elem_tag = elem_tag
        self.elements = elements
        self.uid = _uid()

    def __repr__(self) -> str:
        return f"{self.elem_tag!r}[{len(self.elements)}]#{self.uid}"


@dataclass(frozen=True)
class HostClassRef:
    """Opaque handle a class proxy keeps under its __hostref entry."""

    name: str

    def __repr__(self) -> str:
        return f"class {self.name}"


def _is_wrapper(v) -> bool:
    return getattr(v, "is_script_wrapper", False)


def _signature_key(m: MethodDescriptor) -> tuple:
    return (m.name, m.params)


class HostRegistry:
    def __init__(self, validate_invokes: bool = False):
        self._classes: dict[str, HostClassDescriptor] = {}
        self._flat: dict[str, HostClassDescriptor] = {}
        self._ancestors: dict[str, frozenset] = {}
        self._statics: dict[str, dict] = {}
        self._static_home: dict[str, dict] = {}
        self._instance_inits: dict[str, dict] = {}
        self._frozen = False
        # Conformance re-check of receiver fields after every invoke.
        # Costly, so off by default; the test suite turns it on.
        self.validate_invokes = validate_invokes

    @property
    def frozen(self) -> bool:
        return self._frozen

    def has_class(self, name: str) -> bool:
        return name in self._classes

    # ------------------------------------------------------------ lifecycle

    def register_class(self, d: HostClassDescriptor) -> None:
        if self._frozen:
            raise RegistryFrozen("cannot register classes after freeze")
        if not d.name or not isinstance(d.name, str):
            raise DescriptorError("class name must be a non-empty string")
        if d.name in self._classes:
            raise DuplicateClass(f"class {d.name!r} is already registered")
        if d.kind not in ("class", "interface"):
            raise DescriptorError(f"unknown kind {d.kind!r} for {d.name!r}")

        if d.base is not None:
            if d.kind == "interface":
                raise DescriptorError(f"interface {d.name!r} cannot have a base")
            base = self._classes.get(d.base)
            if base is None or base.kind != "class":
                raise UnknownBase(
                    f"base {d.base!r} of {d.name!r} is not a registered class")

        if d.kind == "interface":
            if d.fields:
                raise DescriptorError(f"interface {d.name!r} cannot declare fields")
            if d.constructors:
                raise DescriptorError(
                    f"interface {d.name!r} cannot declare constructors")

        fields = self._check_fields(d)
        methods = self._check_methods(d)
        constructors = self._check_constructors(d)
        self._check_collisions(d, fields, methods)

        self._classes[d.name] = HostClassDescriptor(
            name=d.name,
            kind=d.kind,
            base=d.base,
            fields=fields,
            methods=methods,
            constructors=constructors,
        )

    def _check_fields(self, d: HostClassDescriptor) -> dict:
        out = {}
        for name, spec in d.fields.items():
            if spec.tag is VOID:
                raise DescriptorError(f"field {d.name}.{name} cannot be void")
            initial = spec.initial
            if initial is _UNSET:
                initial = zero_value(spec.tag)
            else:
                initial = _normalize(spec.tag, initial)
                if not isinstance(initial, (int, float, str, bool, type(None))):
                    raise DescriptorError(
                        f"initial value of {d.name}.{name} must be a primitive or null")
                if not _prim_conforms(initial, spec.tag):
                    raise DescriptorError(
                        f"initial value of {d.name}.{name} does not match its tag")
            out[name] = FieldSpec(spec.tag, spec.static, initial)
        return out

    def _check_methods(self, d: HostClassDescriptor) -> dict:
        out = {}
        for name, overloads in d.methods.items():
            seen_sigs = set()
            statics = set()
            cleaned = []
            for m in overloads:
                if m.name != name:
                    raise DescriptorError(
                        f"method {m.name!r} registered under key {name!r} in {d.name!r}")
                if d.kind == "interface":
                    if m.body is not None:
                        raise DescriptorError(
                            f"interface method {d.name}.{name} cannot have a body")
                    if m.static:
                        raise DescriptorError(
                            f"interface method {d.name}.{name} cannot be static")
                elif m.body is None:
                    raise DescriptorError(
                        f"class method {d.name}.{name} needs a native body")
                sig = tuple(m.params)
                if sig in seen_sigs:
                    raise DescriptorError(
                        f"duplicate overload signature for {d.name}.{name}")
                seen_sigs.add(sig)
                statics.add(m.static)
                _check_body_arity(d.name, m)
                cleaned.append(MethodDescriptor(
                    name, tuple(m.params), m.returns, m.static, m.body))
            if len(statics) > 1:
                raise DescriptorError(
                    f"overloads of {d.name}.{name} mix static and instance")
            out[name] = cleaned
        return out

    def _check_constructors(self, d: HostClassDescriptor) -> list:
        out = []
        seen = set()
        for c in d.constructors:
            sig = tuple(c.params)
            if sig in seen:
                raise DescriptorError(
                    f"duplicate constructor signature for {d.name!r}")
            seen.add(sig)
            ctor = MethodDescriptor("<init>", sig, VOID, False, c.body)
            _check_body_arity(d.name, ctor)
            out.append(ctor)
        return out

    def _check_collisions(self, d, fields: dict, methods: dict) -> None:
        both = set(fields) & set(methods)
        if both:
            raise FieldMethodNameCollision(
                f"{d.name!r} declares {sorted(both)[0]!r} as both field and method")
        # against the flattened base chain: a name may shadow only its own kind
        base = d.base
        while base is not None:
            bd = self._classes[base]
            for name in fields:
                if name in bd.methods:
                    raise FieldMethodNameCollision(
                        f"field {d.name}.{name} collides with method of base {base!r}")
            for name in methods:
                if name in bd.fields:
                    raise FieldMethodNameCollision(
                        f"method {d.name}.{name} collides with field of base {base!r}")
            base = bd.base

    def freeze(self) -> None:
        """Validate cross references and build flattened views. Idempotent."""
        if self._frozen:
            return
        for d in self._classes.values():
            for name, spec in d.fields.items():
                self._check_tag(spec.tag, f"field {d.name}.{name}")
            for overloads in d.methods.values():
                for m in overloads:
                    for t in m.params:
                        self._check_tag(t, f"parameter of {d.name}.{m.name}")
                        if t is VOID:
                            raise DescriptorError(
                                f"parameter of {d.name}.{m.name} cannot be void")
                    if m.returns is not VOID:
                        self._check_tag(m.returns, f"return of {d.name}.{m.name}")
            for c in d.constructors:
                for t in c.params:
                    self._check_tag(t, f"constructor parameter of {d.name}")
                    if t is VOID:
                        raise DescriptorError(
                            f"constructor parameter of {d.name} cannot be void")

        for name, d in self._classes.items():  # bases precede derived classes
            if d.kind == "interface":
                flat = HostClassDescriptor(
                    name=name, kind="interface", base=None,
                    fields={}, methods={k: list(v) for k, v in d.methods.items()},
                    constructors=[])
                self._flat[name] = flat
                self._ancestors[name] = frozenset()
            else:
                self._flat[name] = self._flatten_class(d)
                chain = frozenset(() if d.base is None
                                  else self._ancestors[d.base] | {d.base})
                self._ancestors[name] = chain
                self._build_statics(d)
                self._instance_inits[name] = {
                    fname: spec.initial
                    for fname, spec in self._flat[name].fields.items()
                    if not spec.static
                }
        self._frozen = True

    def _flatten_class(self, d: HostClassDescriptor) -> HostClassDescriptor:
        if d.base is None:
            fields: dict = {}
            methods: dict = {}
        else:
            base_flat = self._flat[d.base]
            fields = dict(base_flat.fields)
            methods = {k: list(v) for k, v in base_flat.methods.items()}
        fields.update(d.fields)
        for name, overloads in d.methods.items():
            merged = methods.get(name)
            if merged is None:
                methods[name] = list(overloads)
                continue
            if merged and any(m.static != overloads[0].static for m in merged):
                raise DescriptorError(
                    f"overloads of {d.name}.{name} mix static and instance "
                    f"across the base chain")
            for m in overloads:
                for i, existing in enumerate(merged):
                    if existing.params == m.params:
                        merged[i] = m  # derived shadows same signature
                        break
                else:
                    merged.append(m)
        ctors = list(d.constructors)
        if not ctors:
            # mirror the host language convention of an implicit default
            ctors = [MethodDescriptor("<init>", (), VOID, False, None)]
        return HostClassDescriptor(
            name=d.name, kind="class", base=d.base,
            fields=fields, methods=methods, constructors=ctors)

    def _build_statics(self, d: HostClassDescriptor) -> None:
        home = dict(self._static_home.get(d.base, {})) if d.base else {}
        own = {}
        for fname, spec in d.fields.items():
            if spec.static:
                own[fname] = spec.initial
                home[fname] = d.name
        self._statics[d.name] = own
        self._static_home[d.name] = home

    def _check_tag(self, tag, where: str) -> None:
        if isinstance(tag, PrimTag):
            return
        if isinstance(tag, ClassTag):
            d = self._classes.get(tag.name)
            if d is None:
                raise ClassNotFound(f"{where}: no class named {tag.name!r}")
            if d.kind != "class":
                raise DescriptorError(f"{where}: {tag.name!r} is not a class")
            return
        if isinstance(tag, InterfaceTag):
            d = self._classes.get(tag.name)
            if d is None:
                raise ClassNotFound(f"{where}: no interface named {tag.name!r}")
            if d.kind != "interface":
                raise DescriptorError(f"{where}: {tag.name!r} is not an interface")
            return
        if isinstance(tag, ArrayTag):
            self._check_tag(tag.elem, where)
            return
        raise DescriptorError(f"{where}: invalid type tag {tag!r}")

    # -------------------------------------------------------------- lookups

    def lookup_class(self, name: str) -> HostClassDescriptor:
        if not self._frozen:
            raise NotFrozen("lookups are permitted only after freeze")
        flat = self._flat.get(name)
        if flat is None:
            raise ClassNotFound(f"no class or interface named {name!r}")
        return flat

    def is_subclass(self, name: str, base: str) -> bool:
        """Strict: a class is not its own subclass."""
        anc = self._ancestors.get(name)
        return anc is not None and base in anc

    def has_default_constructor(self, name: str) -> bool:
        flat = self.lookup_class(name)
        return flat.kind == "class" and any(
            len(c.params) == 0 for c in flat.constructors)

    # ------------------------------------------------------------ instances

    def instantiate(self, name: str, args: list, ctor: MethodDescriptor | None = None):
        flat = self.lookup_class(name)
        if flat.kind != "class":
            raise InterfaceNotInstantiable(f"{name!r} is an interface")
        if ctor is None:
            ctor = self._pick_constructor(flat, args)
        obj = HostObject(name, dict(self._instance_inits[name]))
        if ctor.body is not None:
            _run_native(ctor.body, (obj, *args), f"constructor of {name}")
        if self.validate_invokes:
            self._validate_object(obj)
        return obj

    def _pick_constructor(self, flat, args: list) -> MethodDescriptor:
        matches = [
            c for c in flat.constructors
            if len(c.params) == len(args)
            and all(self.conforms(a, t) for a, t in zip(args, c.params))
        ]
        if not matches:
            raise NoMatch(
                f"no constructor of {flat.name!r} accepts {len(args)} "
                f"argument(s) of these types")
        if len(matches) > 1:
            raise Ambiguous(f"constructor call on {flat.name!r} is ambiguous")
        return matches[0]

    def invoke(self, m: MethodDescriptor, receiver, args: list):
        """Run a native body with already converted host arguments."""
        if m.body is None:
            raise HostException(f"method {m.name!r} has no native body")
        if m.static:
            result = _run_native(m.body, args, m.name)
        else:
            result = _run_native(m.body, (receiver, *args), m.name)
        if m.returns is VOID:
            result = None
        else:
            result = _normalize(m.returns, result)
            if not self.conforms(result, m.returns):
                raise HostException(
                    f"native body of {m.name!r} returned a value that does "
                    f"not conform to {m.returns!r}")
        if self.validate_invokes and receiver is not None:
            self._validate_object(receiver)
        return result

    def call_method(self, target, name: str, args: list):
        """Host-side dynamic dispatch: works on host objects and wrappers."""
        if target is None:
            raise HostException(f"call of {name!r} on a null reference")
        if _is_wrapper(target):
            return target.invoke_method(name, args)
        if isinstance(target, HostObject):
            flat = self.lookup_class(target.class_name)
            cands = flat.methods.get(name)
            if not cands:
                raise NoSuchMember(target.class_name, name)
            for m in cands:
                if len(m.params) == len(args):
                    return self.invoke(m, target, args)
            raise NoMatch(
                f"{target.class_name}.{name} has no overload of arity {len(args)}")
        raise HostException(f"cannot call {name!r} on {target!r}")

    # --------------------------------------------------------------- fields

    def get_field(self, owner, name: str):
        spec, stash = self._resolve_field(owner, name)
        if spec.static:
            return stash[name]
        return owner.fields[name]

    def set_field(self, owner, name: str, value) -> None:
        spec, stash = self._resolve_field(owner, name)
        value = _normalize(spec.tag, value)
        if not self.conforms(value, spec.tag):
            raise TypeMismatch(
                f"cannot store {value!r} into field {name!r} of tag {spec.tag!r}")
        if spec.static:
            stash[name] = value
        else:
            owner.fields[name] = value

    def _resolve_field(self, owner, name: str):
        if isinstance(owner, str):
            flat = self.lookup_class(owner)
            spec = flat.fields.get(name)
            if spec is None or not spec.static:
                raise NoSuchField(f"{owner!r} has no static field {name!r}")
            home = self._static_home[owner][name]
            return spec, self._statics[home]
        if isinstance(owner, HostObject):
            flat = self.lookup_class(owner.class_name)
            spec = flat.fields.get(name)
            if spec is None or spec.static:
                raise NoSuchField(
                    f"{owner.class_name!r} has no instance field {name!r}")
            return spec, None
        raise NoSuchField(f"cannot resolve field {name!r} on {owner!r}")

    def _validate_object(self, obj: HostObject) -> None:
        inits = self._instance_inits.get(obj.class_name)
        flat = self._flat[obj.class_name]
        if inits is None or set(obj.fields) != set(inits):
            raise HostException(
                f"field map of {obj!r} does not match its descriptor")
        for fname, value in obj.fields.items():
            if not self.conforms(value, flat.fields[fname].tag):
                raise HostException(
                    f"field {fname!r} of {obj!r} violates its tag")

    # --------------------------------------------------------------- arrays

    def array_new(self, elem_tag, length: int) -> HostArray:
        if not isinstance(length, int) or isinstance(length, bool) or length < 0:
            raise IndexOutOfBounds(f"invalid array length {length!r}")
        return HostArray(elem_tag, [zero_value(elem_tag)] * length)

    def array_length(self, arr: HostArray) -> int:
        return len(arr.elements)

    def array_get(self, arr: HostArray, index: int):
        if 0 <= index < len(arr.elements):
            return arr.elements[index]
        raise IndexOutOfBounds(
            f"index {index} out of bounds for length {len(arr.elements)}")

    def array_set(self, arr: HostArray, index: int, value) -> None:
        if not 0 <= index < len(arr.elements):
            raise IndexOutOfBounds(
                f"index {index} out of bounds for length {len(arr.elements)}")
        value = _normalize(arr.elem_tag, value)
        if not self.conforms(value, arr.elem_tag):
            raise TypeMismatch(
                f"cannot store {value!r} into an array of {arr.elem_tag!r}")
        arr.elements[index] = value

    # ---------------------------------------------------------- conformance

    def conforms(self, v, tag) -> bool:
        """Does an already host-typed value fit a slot of this tag?"""
        if tag is FLOAT:
            return type(v) is float
        if tag is INTEGER:
            return type(v) is int
        if tag is TEXT:
            return type(v) is str
        if tag is BOOLEAN:
            return type(v) is bool
        if tag is VOID:
            return v is None
        if isinstance(tag, ClassTag):
            if v is None:
                return True
            if isinstance(v, HostObject):
                return v.class_name == tag.name or self.is_subclass(
                    v.class_name, tag.name)
            if _is_wrapper(v):
                t = v.target_type
                return t == tag.name or self.is_subclass(t, tag.name)
            return False
        if isinstance(tag, InterfaceTag):
            if v is None:
                return True
            return _is_wrapper(v) and v.target_type == tag.name
        if isinstance(tag, ArrayTag):
            return v is None or (
                isinstance(v, HostArray) and v.elem_tag == tag.elem)
        return False


def _normalize(tag, v):
    if tag is FLOAT and type(v) is int:
        return float(v)
    return v


def _prim_conforms(v, tag) -> bool:
    if tag is FLOAT:
        return type(v) is float
    if tag is INTEGER:
        return type(v) is int
    if tag is TEXT:
        return type(v) is str
    if tag is BOOLEAN:
        return type(v) is bool
    return v is None  # reference tags accept only null as a literal initial


def _check_body_arity(class_name: str, m: MethodDescriptor) -> None:
    if m.body is None:
        return
    try:
        sig = inspect.signature(m.body)
    except (TypeError, ValueError):
        return
    params = list(sig.parameters.values())
    if any(p.kind is inspect.Parameter.VAR_POSITIONAL for p in params):
        return
    positional = [p for p in params
                  if p.kind in (inspect.Parameter.POSITIONAL_ONLY,
                                inspect.Parameter.POSITIONAL_OR_KEYWORD)]
    expected = len(m.params) + (0 if m.static else 1)
    if len(positional) != expected:
        raise DescriptorError(
            f"native body of {class_name}.{m.name} takes {len(positional)} "
            f"positional argument(s), expected {expected}")


def _run_native(body, args, what: str):
    try:
        return body(*args)
    except BridgeScriptError:
        raise
    except Exception as e:  # noqa: BLE001 - host code may raise anything
        raise HostException(f"{what}: {e}") from e
