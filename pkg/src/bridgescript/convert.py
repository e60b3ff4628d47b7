"""Conversion between script and host values, and overload resolution.

to_host scores each conversion: 2 for an exact match, 1 for a coercion
(integral number into an integer slot, nil into any reference slot, a
proxy of a strict subclass, a plain table wrapped as an interface or
class).  Everything else is Incompatible, which is a result rather than
an error.  A candidate's score is the sum over its parameters and
select_overload picks the strict maximum: no viable candidate is NoMatch,
a tied maximum is Ambiguous.

This module also owns the proxy identity cache: one proxy table per live
host object, held weakly so unused proxies can be collected.
"""

import weakref
from dataclasses import dataclass

from .errors import ClassNotFound, NotFrozen
from .objects import NIL, Table, type_name
from .registry import (
    BOOLEAN,
    FLOAT,
    INTEGER,
    TEXT,
    ArrayTag,
    ClassTag,
    HostArray,
    HostClassRef,
    HostObject,
    InterfaceTag,
    MethodDescriptor,
)


class Converted:
    __slots__ = ("value", "score")

    def __init__(self, value, score: int):
        self.value = value
        self.score = score

    def __repr__(self) -> str:
        return f"Converted({self.value!r}, score={self.score})"


class Incompatible:
    __slots__ = ("reason",)

    def __init__(self, reason: str):
        self.reason = reason

    def __repr__(self) -> str:
        return f"Incompatible({self.reason!r})"


@dataclass(frozen=True)
class OverloadDecision:
    status: str  # "selected" | "no_match" | "ambiguous"
    method: MethodDescriptor | None = None
    args: tuple | None = None
    tied: tuple = ()


class Converter:
    def __init__(self, registry, proxy_factory, auto_wrap):
        self.registry = registry
        self.proxy_factory = proxy_factory  # host reference -> fresh proxy Table
        self.auto_wrap = auto_wrap          # (Table, type name) -> ScriptWrapper
        self._proxies = weakref.WeakValueDictionary()  # host uid -> proxy Table
        self._class_proxies: dict[str, Table] = {}

    # ------------------------------------------------------- script to host

    def to_host(self, v, tag):
        if tag is FLOAT:
            if v.__class__ is float:
                return Converted(v, 2)
            return Incompatible(f"expected a number, got {_script_kind(v)}")
        if tag is INTEGER:
            if v.__class__ is float:
                if v.is_integer():
                    return Converted(int(v), 1)
                return Incompatible(f"{v!r} has a fractional part")
            return Incompatible(f"expected a number, got {_script_kind(v)}")
        if tag is TEXT:
            if v.__class__ is str:
                return Converted(v, 2)
            return Incompatible(f"expected a string, got {_script_kind(v)}")
        if tag is BOOLEAN:
            if v.__class__ is bool:
                return Converted(v, 2)
            return Incompatible(f"expected a boolean, got {_script_kind(v)}")
        if isinstance(tag, ClassTag):
            if v is NIL:
                return Converted(None, 1)
            if v.__class__ is Table:
                ref = v.entries.get("__hostref")
                if ref is None:
                    if self._wrappable(tag.name, "class"):
                        return Converted(self.auto_wrap(v, tag.name), 1)
                    return Incompatible(
                        f"{tag.name!r} cannot back a plain table")
                if ref.__class__ is HostObject:
                    if ref.class_name == tag.name:
                        return Converted(ref, 2)
                    if self.registry.is_subclass(ref.class_name, tag.name):
                        return Converted(ref, 1)
                    return Incompatible(
                        f"{ref.class_name!r} is not a {tag.name!r}")
                return Incompatible(f"proxy of {ref!r} is not a {tag.name!r}")
            return Incompatible(
                f"expected a {tag.name!r}, got {_script_kind(v)}")
        if isinstance(tag, InterfaceTag):
            if v is NIL:
                return Converted(None, 1)
            if v.__class__ is Table and "__hostref" not in v.entries:
                if self._wrappable(tag.name, "interface"):
                    return Converted(self.auto_wrap(v, tag.name), 1)
                return Incompatible(f"{tag.name!r} is not a known interface")
            return Incompatible(
                f"expected a {tag.name!r} implementation, got {_script_kind(v)}")
        if isinstance(tag, ArrayTag):
            if v is NIL:
                return Converted(None, 1)
            if v.__class__ is Table:
                ref = v.entries.get("__hostref")
                if ref is not None and ref.__class__ is HostArray \
                        and ref.elem_tag == tag.elem:
                    return Converted(ref, 2)
            return Incompatible(
                f"expected an array of {tag.elem!r}, got {_script_kind(v)}")
        return Incompatible(f"no value converts to {tag!r}")

    def _wrappable(self, name: str, want_kind: str) -> bool:
        try:
            flat = self.registry.lookup_class(name)
        except (ClassNotFound, NotFrozen):
            return False
        if flat.kind != want_kind:
            return False
        if want_kind == "class":
            return any(len(c.params) == 0 for c in flat.constructors)
        return True

    # ------------------------------------------------------- host to script

    def to_script(self, h):
        if h is None:
            return NIL
        cls = h.__class__
        if cls is float or cls is str or cls is bool:
            return h
        if cls is int:
            return float(h)
        if cls is HostObject or cls is HostArray:
            proxy = self._proxies.get(h.uid)
            if proxy is None:
                proxy = self.proxy_factory(h)
                self._proxies[h.uid] = proxy
            return proxy
        if getattr(h, "is_script_wrapper", False):
            return h.script_object
        if cls is HostClassRef:
            return self.class_proxy(h.name)
        raise TypeError(f"not a host value: {h!r}")

    def class_proxy(self, name: str) -> Table:
        proxy = self._class_proxies.get(name)
        if proxy is None:
            self.registry.lookup_class(name)  # raises ClassNotFound
            proxy = self.proxy_factory(HostClassRef(name))
            self._class_proxies[name] = proxy
        return proxy

    # --------------------------------------------------- overload resolution

    def convert_args(self, m: MethodDescriptor, args: list):
        """All-or-nothing conversion against one candidate's parameters.

        Returns (score, converted list) or None when the candidate is not
        viable (wrong arity or any incompatible argument).
        """
        params = m.params
        if len(args) != len(params):
            return None
        score = 0
        out = []
        for v, tag in zip(args, params):
            r = self.to_host(v, tag)
            if r.__class__ is Incompatible:
                return None
            score += r.score
            out.append(r.value)
        return score, out

    def score_candidate(self, m: MethodDescriptor, args: list):
        r = self.convert_args(m, args)
        return None if r is None else r[0]

    def select_overload(self, cands: list, args: list) -> OverloadDecision:
        best_score = -1
        best = None
        tied: list = []
        for m in cands:
            r = self.convert_args(m, args)
            if r is None:
                continue
            score, conv = r
            if score > best_score:
                best_score = score
                best = (m, conv)
                tied = [m]
            elif score == best_score:
                tied.append(m)
        if best is None:
            return OverloadDecision("no_match")
        if len(tied) > 1:
            return OverloadDecision("ambiguous", tied=tuple(tied))
        return OverloadDecision("selected", best[0], tuple(best[1]))


def _script_kind(v) -> str:
    return type_name(v)
