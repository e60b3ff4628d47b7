"""JSON-friendly class-set manifests.

A manifest is a dict with a "classes" list (a bare list also works).
Each record:

    {
      "name": "demo.Frame",
      "kind": "class",                 # default; or "interface"
      "base": "demo.Component",        # optional
      "fields": {
        "title": "text",               # tag string, or
        "NORTH": {"tag": "text", "static": true, "initial": "North"}
      },
      "constructors": [[], ["text"]],  # parameter tag lists
      "methods": [
        {"name": "add", "params": ["text", "class:demo.Component"],
         "returns": "void"},
        {"name": "twice", "params": ["float"], "returns": "float",
         "static": true}
      ]
    }

Tag strings: boolean, integer, float, text, void, class:Name,
interface:Name, and array:<elem> (nestable).  Records register in order,
so bases come before subclasses.

Native bodies live outside the manifest: a dict keyed
"Class.method/arity" with "<init>" for constructors; when overloads
share an arity, key by signature instead, "Class.method(tag,tag)".
Instance bodies receive the receiver first.  A class method whose key is
missing has no body, which the registry rejects at registration.
"""

from .errors import ManifestError
from .registry import (
    BOOLEAN,
    FLOAT,
    INTEGER,
    TEXT,
    VOID,
    ArrayTag,
    ClassTag,
    FieldSpec,
    HostClassDescriptor,
    InterfaceTag,
    MethodDescriptor,
)

_PRIM = {
    "boolean": BOOLEAN,
    "integer": INTEGER,
    "float": FLOAT,
    "text": TEXT,
    "void": VOID,
}
_PRIM_NAMES = {v: k for k, v in _PRIM.items()}


def parse_tag(s):
    if not isinstance(s, str):
        raise ManifestError(f"tag must be a string, got {s!r}")
    t = _PRIM.get(s)
    if t is not None:
        return t
    if s.startswith("class:"):
        name = s[len("class:"):]
        if not name:
            raise ManifestError("empty class name in tag")
        return ClassTag(name)
    if s.startswith("interface:"):
        name = s[len("interface:"):]
        if not name:
            raise ManifestError("empty interface name in tag")
        return InterfaceTag(name)
    if s.startswith("array:"):
        return ArrayTag(parse_tag(s[len("array:"):]))
    raise ManifestError(f"unknown tag {s!r}")


def format_tag(tag) -> str:
    name = _PRIM_NAMES.get(tag)
    if name is not None:
        return name
    if isinstance(tag, ClassTag):
        return f"class:{tag.name}"
    if isinstance(tag, InterfaceTag):
        return f"interface:{tag.name}"
    if isinstance(tag, ArrayTag):
        return f"array:{format_tag(tag.elem)}"
    raise ManifestError(f"not a tag: {tag!r}")


def body_key(class_name: str, method: str, arity: int) -> str:
    return f"{class_name}.{method}/{arity}"


def signature_key(class_name: str, method: str, param_tags) -> str:
    """Body key that survives same-arity overloads, e.g.
    "demo.MathUtil.describe(float)"."""
    inner = ",".join(format_tag(p) for p in param_tags)
    return f"{class_name}.{method}({inner})"


def _find_body(bodies, class_name, method, params):
    b = bodies.get(signature_key(class_name, method, params))
    if b is None:
        b = bodies.get(body_key(class_name, method, len(params)))
    return b


def register_from_manifest(registry, manifest, bodies=None) -> None:
    if isinstance(manifest, dict):
        records = manifest.get("classes")
    else:
        records = manifest
    if not isinstance(records, list):
        raise ManifestError("manifest needs a 'classes' list")
    bodies = bodies or {}
    for rec in records:
        registry.register_class(_build_descriptor(rec, bodies))


def _build_descriptor(rec, bodies) -> HostClassDescriptor:
    if not isinstance(rec, dict):
        raise ManifestError(f"class record must be an object, got {rec!r}")
    name = rec.get("name")
    if not isinstance(name, str) or not name:
        raise ManifestError("class record needs a non-empty 'name'")
    kind = rec.get("kind", "class")
    if kind not in ("class", "interface"):
        raise ManifestError(f"{name}: kind must be 'class' or 'interface'")
    base = rec.get("base")
    if base is not None and not isinstance(base, str):
        raise ManifestError(f"{name}: base must be a class name")

    fields = {}
    for fname, fd in (rec.get("fields") or {}).items():
        if isinstance(fd, str):
            fields[fname] = FieldSpec(parse_tag(fd))
        elif isinstance(fd, dict):
            tag = parse_tag(fd.get("tag"))
            static = bool(fd.get("static", False))
            if "initial" in fd:
                fields[fname] = FieldSpec(tag, static, fd["initial"])
            else:
                fields[fname] = FieldSpec(tag, static)
        else:
            raise ManifestError(f"{name}.{fname}: bad field spec {fd!r}")

    ctors = []
    for params in rec.get("constructors") or []:
        if not isinstance(params, list):
            raise ManifestError(f"{name}: constructor params must be a list")
        tags = tuple(parse_tag(p) for p in params)
        ctors.append(MethodDescriptor(
            "<init>", tags, VOID, False,
            _find_body(bodies, name, "<init>", tags)))

    methods: dict = {}
    for md in rec.get("methods") or []:
        if not isinstance(md, dict):
            raise ManifestError(f"{name}: method record must be an object")
        mname = md.get("name")
        if not isinstance(mname, str) or not mname:
            raise ManifestError(f"{name}: method record needs a 'name'")
        params = tuple(parse_tag(p) for p in md.get("params") or [])
        returns = parse_tag(md.get("returns", "void"))
        static = bool(md.get("static", False))
        body = None
        if kind == "class":
            body = _find_body(bodies, name, mname, params)
        methods.setdefault(mname, []).append(
            MethodDescriptor(mname, params, returns, static, body))

    return HostClassDescriptor(
        name=name, kind=kind, base=base,
        fields=fields, methods=methods, constructors=ctors)
