"""AST nodes and their compilation to Python closures.

Nodes do not evaluate themselves directly.  Each expression compiles
once into a closure env -> value, and each statement into a closure
env -> None | list, where a list is the in-flight result of a return
statement; block runners propagate it upward.  Compiling ahead of
execution keeps the hot path free of per-visit dispatch and lets shapes
the parser produces often (constant operands, x = x + k, bare-receiver
method calls) collapse into single specialized closures.  The
specializations never change observable behaviour: fused forms read
variables once, but variable reads are side-effect free.

Every node carries the line of its first token.  unparse() emits source
that parses back to a structurally identical tree (lines aside).
Statement sequences are joined with semicolons so that adjacent
statements cannot merge when reparsed.
"""

from math import copysign

from .errors import BridgeScriptError, KeyIsNil, NotCallable, ScriptRuntimeError
from .objects import (
    NIL,
    Closure,
    Environment,
    NativeFunction,
    Table,
    format_number,
    script_equals,
    type_name,
)

_MISS = object()
_EMPTY: list = []

_IDENT_OK = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}


def quote_string(s: str) -> str:
    return '"' + "".join(_ESCAPES.get(c, c) for c in s) + '"'


def _is_plain_ident(s: str) -> bool:
    from .lexer import KEYWORDS

    return bool(s) and not s[0].isdigit() and set(s) <= _IDENT_OK and s not in KEYWORDS


def _wrap_postfixable(node) -> str:
    """Parenthesize expressions that cannot be an index or call base as-is."""
    text = node.unparse()
    if isinstance(node, (VarExpr, IndexExpr, CallExpr)):
        return text
    return "(" + text + ")"


class Node:
    __slots__ = ("line",)


# ------------------------------------------------------------- expressions

class NumberLit(Node):
    __slots__ = ("value",)

    def __init__(self, value: float, line: int):
        self.value = value
        self.line = line

    def compile(self):
        v = self.value
        return lambda env: v

    def unparse(self) -> str:
        return repr(self.value)


class StringLit(Node):
    __slots__ = ("value",)

    def __init__(self, value: str, line: int):
        self.value = value
        self.line = line

    def compile(self):
        v = self.value
        return lambda env: v

    def unparse(self) -> str:
        return quote_string(self.value)


class BoolLit(Node):
    __slots__ = ("value",)

    def __init__(self, value: bool, line: int):
        self.value = value
        self.line = line

    def compile(self):
        v = self.value
        return lambda env: v

    def unparse(self) -> str:
        return "true" if self.value else "false"


class NilLit(Node):
    __slots__ = ()

    def __init__(self, line: int):
        self.line = line

    def compile(self):
        return lambda env: NIL

    def unparse(self) -> str:
        return "nil"


class VarExpr(Node):
    __slots__ = ("name",)

    def __init__(self, name: str, line: int):
        self.name = name
        self.line = line

    def compile(self):
        name = self.name

        def read(env):
            e = env
            while e is not None:
                v = e.vars.get(name, _MISS)
                if v is not _MISS:
                    return v
                e = e.parent
            return NIL

        return read

    def unparse(self) -> str:
        return self.name


def _index_fallback(t, key, line):
    handler = t.index_handler
    if handler is None:
        return NIL
    try:
        vals = handler.invoke([t, key])
    except BridgeScriptError as e:
        if e.line is None:
            e.line = line
        raise
    return vals[0] if vals else NIL


class IndexExpr(Node):
    __slots__ = ("obj", "key")

    def __init__(self, obj, key, line: int):
        self.obj = obj
        self.key = key
        self.line = line

    def compile(self):
        obj_c = self.obj.compile()
        line = self.line
        if self.key.__class__ is StringLit:
            key = self.key.value

            def index_const(env):
                t = obj_c(env)
                if t.__class__ is not Table:
                    raise ScriptRuntimeError(
                        f"attempt to index a {type_name(t)} value", line)
                v = t.entries.get(key, _MISS)
                if v is not _MISS:
                    return v
                return _index_fallback(t, key, line)

            return index_const
        key_c = self.key.compile()

        def index(env):
            t = obj_c(env)
            if t.__class__ is not Table:
                raise ScriptRuntimeError(
                    f"attempt to index a {type_name(t)} value", line)
            key = key_c(env)
            if key.__class__ is str or key.__class__ is float:
                v = t.entries.get(key, _MISS)
                if v is not _MISS:
                    return v
                return _index_fallback(t, key, line)
            if key is NIL:
                raise KeyIsNil("table key is nil", line)
            raise ScriptRuntimeError(
                f"table key must be a string or number, got {type_name(key)}",
                line)

        return index

    def unparse(self) -> str:
        base = _wrap_postfixable(self.obj)
        if isinstance(self.key, StringLit) and _is_plain_ident(self.key.value):
            return f"{base}.{self.key.value}"
        return f"{base}[{self.key.unparse()}]"


class CallExpr(Node):
    __slots__ = ("callee", "args")

    def __init__(self, callee, args: list, line: int):
        self.callee = callee
        self.args = args
        self.line = line

    def compile(self):
        line = self.line
        callee = self.callee
        # recv.name(recv, ...) with a bare-name receiver is what colon
        # calls desugar to; fuse it so the receiver is read once.
        if (callee.__class__ is IndexExpr
                and callee.key.__class__ is StringLit
                and callee.obj.__class__ is VarExpr
                and self.args
                and self.args[0].__class__ is VarExpr
                and self.args[0].name == callee.obj.name):
            recv_c = callee.obj.compile()
            mname = callee.key.value
            rest_c = tuple(a.compile() for a in self.args[1:])

            def method_call(env):
                recv = recv_c(env)
                if recv.__class__ is not Table:
                    raise ScriptRuntimeError(
                        f"attempt to index a {type_name(recv)} value", line)
                f = recv.entries.get(mname, _MISS)
                if f is _MISS:
                    f = _index_fallback(recv, mname, line)
                args = [recv]
                for c in rest_c:
                    args.append(c(env))
                cls = f.__class__
                if cls is Closure:
                    vals = f.invoke(args)
                elif cls is NativeFunction:
                    try:
                        vals = f.fn(args)
                    except BridgeScriptError as e:
                        if e.line is None:
                            e.line = line
                        raise
                else:
                    raise NotCallable(
                        f"attempt to call a {type_name(f)} value", line)
                return vals[0] if vals else NIL

            return method_call

        callee_c = callee.compile()
        if not self.args:
            def call0(env):
                f = callee_c(env)
                cls = f.__class__
                if cls is Closure:
                    # bodies that bind nothing run straight in their
                    # captured scope, no frame needed
                    vals = (f.invoke(_EMPTY) if f.needs_scope
                            else f.body(f.env))
                elif cls is NativeFunction:
                    try:
                        vals = f.fn([])
                    except BridgeScriptError as e:
                        if e.line is None:
                            e.line = line
                        raise
                else:
                    raise NotCallable(
                        f"attempt to call a {type_name(f)} value", line)
                return vals[0] if vals else NIL

            return call0
        args_c = tuple(a.compile() for a in self.args)

        def call(env):
            f = callee_c(env)
            args = [c(env) for c in args_c]
            cls = f.__class__
            if cls is Closure:
                vals = f.invoke(args)
            elif cls is NativeFunction:
                try:
                    vals = f.fn(args)
                except BridgeScriptError as e:
                    if e.line is None:
                        e.line = line
                    raise
            else:
                raise NotCallable(
                    f"attempt to call a {type_name(f)} value", line)
            return vals[0] if vals else NIL

        return call

    def unparse(self) -> str:
        callee = _wrap_postfixable(self.callee)
        return f"{callee}({', '.join(a.unparse() for a in self.args)})"


class FunctionExpr(Node):
    __slots__ = ("params", "body")

    def __init__(self, params: list[str], body: "Block", line: int):
        self.params = params
        self.body = body
        self.line = line

    def compile(self):
        params = tuple(self.params)
        body_c = self.body.compile_inline()
        # a body with no params and no top-level locals binds nothing,
        # so it can run straight in the captured scope
        needs_scope = bool(params) or self.body.has_local

        def make(env):
            return Closure(params, body_c, env, needs_scope)

        return make

    def unparse(self) -> str:
        return f"function({', '.join(self.params)}) {self.body.unparse()} end"


class TableCtor(Node):
    __slots__ = ("fields",)

    def __init__(self, fields: list, line: int):
        self.fields = fields  # list of (name, expr)
        self.line = line

    def compile(self):
        fields_c = tuple((name, expr.compile()) for name, expr in self.fields)

        def make(env):
            t = Table()
            entries = t.entries
            for name, c in fields_c:
                v = c(env)
                if v is not NIL:
                    entries[name] = v
            return t

        return make

    def unparse(self) -> str:
        inner = ", ".join(f"{k} = {e.unparse()}" for k, e in self.fields)
        return "{" + inner + "}"


class ColonCall(Node):
    """Transient parse form of recv:name(args); never survives parsing."""

    __slots__ = ("recv", "name", "args")

    def __init__(self, recv, name: str, args: list, line: int):
        self.recv = recv
        self.name = name
        self.args = args
        self.line = line


def _read_name(env, name):
    while env is not None:
        v = env.vars.get(name, _MISS)
        if v is not _MISS:
            return v
        env = env.parent
    return NIL


def _arith_error(l, r, line):
    bad = l if l.__class__ is not float else r
    return ScriptRuntimeError(
        f"attempt to perform arithmetic on a {type_name(bad)} value", line)


def _divide(l, r):
    if r != 0.0:
        return l / r
    # numbers are IEEE doubles, so follow IEEE rather than raise
    if l == 0.0:
        return float("nan")
    same_sign = copysign(1.0, l) == copysign(1.0, r)
    return float("inf") if same_sign else float("-inf")


class BinOp(Node):
    __slots__ = ("op", "left", "right")

    def __init__(self, op: str, left, right, line: int):
        self.op = op
        self.left = left
        self.right = right
        self.line = line

    def compile(self):
        op = self.op
        line = self.line
        left = self.left
        right = self.right
        # x <op> k with a bare variable and a literal number collapses
        # into one closure; loop conditions and counters are this shape
        if (op in ("+", "-", "*", "<", "<=", ">", ">=")
                and left.__class__ is VarExpr
                and right.__class__ is NumberLit):
            name = left.name
            k = right.value
            return _var_op_const(op, name, k, line)
        lc = left.compile()
        rc = right.compile()
        if op == "+":
            def add(env):
                l = lc(env)
                r = rc(env)
                if l.__class__ is float and r.__class__ is float:
                    return l + r
                raise _arith_error(l, r, line)
            return add
        if op == "-":
            def sub(env):
                l = lc(env)
                r = rc(env)
                if l.__class__ is float and r.__class__ is float:
                    return l - r
                raise _arith_error(l, r, line)
            return sub
        if op == "*":
            def mul(env):
                l = lc(env)
                r = rc(env)
                if l.__class__ is float and r.__class__ is float:
                    return l * r
                raise _arith_error(l, r, line)
            return mul
        if op == "/":
            def div(env):
                l = lc(env)
                r = rc(env)
                if l.__class__ is float and r.__class__ is float:
                    return _divide(l, r)
                raise _arith_error(l, r, line)
            return div
        if op == "==":
            return lambda env: script_equals(lc(env), rc(env))
        if op == "~=":
            return lambda env: not script_equals(lc(env), rc(env))
        if op == "..":
            def concat(env):
                l = lc(env)
                r = rc(env)
                lt = l if l.__class__ is str else (
                    format_number(l) if l.__class__ is float else None)
                rt = r if r.__class__ is str else (
                    format_number(r) if r.__class__ is float else None)
                if lt is not None and rt is not None:
                    return lt + rt
                bad = l if lt is None else r
                raise ScriptRuntimeError(
                    f"attempt to concatenate a {type_name(bad)} value", line)
            return concat
        return _compare(op, lc, rc, line)

    def unparse(self) -> str:
        return f"({self.left.unparse()} {self.op} {self.right.unparse()})"


def _compare(op, lc, rc, line):
    def check(l, r):
        if l.__class__ is float and r.__class__ is float:
            return
        if l.__class__ is str and r.__class__ is str:
            return
        raise ScriptRuntimeError(
            f"attempt to compare {type_name(l)} with {type_name(r)}", line)

    if op == "<":
        def lt(env):
            l = lc(env)
            r = rc(env)
            check(l, r)
            return l < r
        return lt
    if op == "<=":
        def le(env):
            l = lc(env)
            r = rc(env)
            check(l, r)
            return l <= r
        return le
    if op == ">":
        def gt(env):
            l = lc(env)
            r = rc(env)
            check(l, r)
            return l > r
        return gt

    def ge(env):
        l = lc(env)
        r = rc(env)
        check(l, r)
        return l >= r
    return ge


def _var_op_const(op, name, k, line):
    if op == "+":
        def add(env):
            v = _read_name(env, name)
            if v.__class__ is float:
                return v + k
            raise _arith_error(v, k, line)
        return add
    if op == "-":
        def sub(env):
            v = _read_name(env, name)
            if v.__class__ is float:
                return v - k
            raise _arith_error(v, k, line)
        return sub
    if op == "*":
        def mul(env):
            v = _read_name(env, name)
            if v.__class__ is float:
                return v * k
            raise _arith_error(v, k, line)
        return mul
    if op == "<":
        def lt(env):
            v = _read_name(env, name)
            if v.__class__ is float:
                return v < k
            raise ScriptRuntimeError(
                f"attempt to compare {type_name(v)} with number", line)
        return lt
    if op == "<=":
        def le(env):
            v = _read_name(env, name)
            if v.__class__ is float:
                return v <= k
            raise ScriptRuntimeError(
                f"attempt to compare {type_name(v)} with number", line)
        return le
    if op == ">":
        def gt(env):
            v = _read_name(env, name)
            if v.__class__ is float:
                return v > k
            raise ScriptRuntimeError(
                f"attempt to compare {type_name(v)} with number", line)
        return gt

    def ge(env):
        v = _read_name(env, name)
        if v.__class__ is float:
            return v >= k
        raise ScriptRuntimeError(
            f"attempt to compare {type_name(v)} with number", line)
    return ge


class UnaryOp(Node):
    __slots__ = ("op", "operand")

    def __init__(self, op: str, operand, line: int):
        self.op = op
        self.operand = operand
        self.line = line

    def compile(self):
        c = self.operand.compile()
        line = self.line

        def neg(env):
            v = c(env)
            if v.__class__ is float:
                return -v
            raise ScriptRuntimeError(
                f"attempt to perform arithmetic on a {type_name(v)} value",
                line)

        return neg

    def unparse(self) -> str:
        return f"(-{self.operand.unparse()})"


# -------------------------------------------------------------- statements

class Block:
    __slots__ = ("stmts", "has_local")

    def __init__(self, stmts: list):
        self.stmts = stmts
        self.has_local = any(s.__class__ is LocalDecl for s in stmts)

    def compile_inline(self):
        """Sequence closure running the statements in the given env."""
        codes = [s.compile_stmt() for s in self.stmts]
        if not codes:
            return lambda env: None
        if len(codes) == 1:
            return codes[0]
        if len(codes) == 2:
            c0, c1 = codes

            def run2(env):
                r = c0(env)
                if r is not None:
                    return r
                return c1(env)

            return run2
        codes_t = tuple(codes)

        def run(env):
            for c in codes_t:
                r = c(env)
                if r is not None:
                    return r
            return None

        return run

    def compile_scoped(self):
        """Like compile_inline, but locals get their own scope."""
        run = self.compile_inline()
        if not self.has_local:
            return run

        def scoped(env):
            return run(Environment(env))

        return scoped

    def unparse(self) -> str:
        return "; ".join(s.unparse() for s in self.stmts)


class ExprStat(Node):
    __slots__ = ("expr",)

    def __init__(self, expr, line: int):
        self.expr = expr
        self.line = line

    def compile_stmt(self):
        c = self.expr.compile()

        def run(env):
            c(env)
            return None

        return run

    def unparse(self) -> str:
        return self.expr.unparse()


class AssignName(Node):
    __slots__ = ("name", "expr")

    def __init__(self, name: str, expr, line: int):
        self.name = name
        self.expr = expr
        self.line = line

    def compile_stmt(self):
        name = self.name
        expr = self.expr
        # x = x <op> k updates in place: one walk finds the binding and
        # stores through it (an unbound x still reads as nil and fails
        # the arithmetic the same way the unfused form does)
        if (expr.__class__ is BinOp and expr.op in ("+", "-")
                and expr.left.__class__ is VarExpr
                and expr.left.name == name
                and expr.right.__class__ is NumberLit):
            k = expr.right.value
            line = expr.line
            if expr.op == "-":
                k = -k

            def bump(env):
                e = env
                while True:
                    vars = e.vars
                    v = vars.get(name, _MISS)
                    if v is not _MISS:
                        if v.__class__ is float:
                            vars[name] = v + k
                            return None
                        raise _arith_error(v, k, line)
                    p = e.parent
                    if p is None:
                        raise ScriptRuntimeError(
                            "attempt to perform arithmetic on a nil value",
                            line)
                    e = p

            return bump

        expr_c = expr.compile()

        def assign(env):
            v = expr_c(env)
            e = env
            while True:
                vars = e.vars
                if name in vars:
                    vars[name] = v
                    return None
                p = e.parent
                if p is None:
                    vars[name] = v
                    return None
                e = p

        return assign

    def unparse(self) -> str:
        return f"{self.name} = {self.expr.unparse()}"


class AssignIndex(Node):
    __slots__ = ("obj", "key", "expr")

    def __init__(self, obj, key, expr, line: int):
        self.obj = obj
        self.key = key
        self.expr = expr
        self.line = line

    def compile_stmt(self):
        obj_c = self.obj.compile()
        expr_c = self.expr.compile()
        line = self.line
        const_key = self.key.value if self.key.__class__ is StringLit else None
        key_c = None if const_key is not None else self.key.compile()

        def store(env):
            t = obj_c(env)
            if t.__class__ is not Table:
                raise ScriptRuntimeError(
                    f"attempt to index a {type_name(t)} value", line)
            if const_key is not None:
                key = const_key
            else:
                key = key_c(env)
                if not (key.__class__ is str or key.__class__ is float):
                    if key is NIL:
                        raise KeyIsNil("table key is nil", line)
                    raise ScriptRuntimeError(
                        f"table key must be a string or number, "
                        f"got {type_name(key)}", line)
            v = expr_c(env)
            handler = t.newindex_handler
            if handler is not None:
                try:
                    handler.invoke([t, key, v])
                except BridgeScriptError as e:
                    if e.line is None:
                        e.line = line
                    raise
                return None
            if v is NIL:
                t.entries.pop(key, None)
            else:
                t.entries[key] = v
            return None

        return store

    def unparse(self) -> str:
        base = _wrap_postfixable(self.obj)
        if isinstance(self.key, StringLit) and _is_plain_ident(self.key.value):
            return f"{base}.{self.key.value} = {self.expr.unparse()}"
        return f"{base}[{self.key.unparse()}] = {self.expr.unparse()}"


class LocalDecl(Node):
    __slots__ = ("name", "expr")

    def __init__(self, name: str, expr, line: int):
        self.name = name
        self.expr = expr  # may be None
        self.line = line

    def compile_stmt(self):
        name = self.name
        if self.expr is None:
            def declare(env):
                env.vars[name] = NIL
                return None
            return declare
        expr_c = self.expr.compile()

        def declare_init(env):
            env.vars[name] = expr_c(env)
            return None

        return declare_init

    def unparse(self) -> str:
        if self.expr is None:
            return f"local {self.name}"
        return f"local {self.name} = {self.expr.unparse()}"


class IfStat(Node):
    __slots__ = ("clauses", "else_block")

    def __init__(self, clauses: list, else_block, line: int):
        self.clauses = clauses  # list of (cond, Block)
        self.else_block = else_block  # Block or None
        self.line = line

    def compile_stmt(self):
        else_c = (self.else_block.compile_scoped()
                  if self.else_block is not None else None)
        if len(self.clauses) == 1:
            cond_c = self.clauses[0][0].compile()
            block_c = self.clauses[0][1].compile_scoped()
            if else_c is None:
                def run_if(env):
                    c = cond_c(env)
                    if c is not NIL and c is not False:
                        return block_c(env)
                    return None
                return run_if

            def run_if_else(env):
                c = cond_c(env)
                if c is not NIL and c is not False:
                    return block_c(env)
                return else_c(env)
            return run_if_else

        clauses_c = tuple(
            (cond.compile(), block.compile_scoped())
            for cond, block in self.clauses)

        def run(env):
            for cond_c, block_c in clauses_c:
                c = cond_c(env)
                if c is not NIL and c is not False:
                    return block_c(env)
            if else_c is not None:
                return else_c(env)
            return None

        return run

    def unparse(self) -> str:
        parts = []
        for i, (cond, block) in enumerate(self.clauses):
            word = "if" if i == 0 else "elseif"
            parts.append(f"{word} {cond.unparse()} then {block.unparse()}")
        if self.else_block is not None:
            parts.append(f"else {self.else_block.unparse()}")
        return " ".join(parts) + " end"


class WhileStat(Node):
    __slots__ = ("cond", "body")

    def __init__(self, cond, body: Block, line: int):
        self.cond = cond
        self.body = body
        self.line = line

    def compile_stmt(self):
        fused = self._compile_counter_loop()
        if fused is not None:
            return fused
        cond_c = self.cond.compile()
        body_c = self.body.compile_inline()
        if self.body.has_local:
            def run_scoped(env):
                while True:
                    c = cond_c(env)
                    if c is NIL or c is False:
                        return None
                    r = body_c(Environment(env))
                    if r is not None:
                        return r
            return run_scoped

        def run(env):
            while True:
                c = cond_c(env)
                if c is NIL or c is False:
                    return None
                r = body_c(env)
                if r is not None:
                    return r

        return run

    def _compile_counter_loop(self):
        """while i < K do ... i = i + s end resolves i's binding once.

        Sound because a binding, once found from a given scope, cannot
        move: nothing deletes bindings, and per-iteration child scopes
        sit below the resolved one.  Not applied when the body's own
        locals include the counter name, since those shadow it.
        """
        cond = self.cond
        stmts = self.body.stmts
        if not (cond.__class__ is BinOp and cond.op in ("<", "<=")
                and cond.left.__class__ is VarExpr
                and cond.right.__class__ is NumberLit
                and stmts):
            return None
        last = stmts[-1]
        if not (last.__class__ is AssignName
                and last.name == cond.left.name
                and last.expr.__class__ is BinOp
                and last.expr.op in ("+", "-")
                and last.expr.left.__class__ is VarExpr
                and last.expr.left.name == last.name
                and last.expr.right.__class__ is NumberLit):
            return None
        name = cond.left.name
        rest = Block(stmts[:-1])
        if any(s.__class__ is LocalDecl and s.name == name
               for s in rest.stmts):
            return None
        limit = cond.right.value
        inclusive = cond.op == "<="
        step = last.expr.right.value
        if last.expr.op == "-":
            step = -step
        cond_line = cond.line
        incr_line = last.expr.line
        body_c = rest.compile_inline()
        scoped = rest.has_local

        def run(env):
            e = env
            while e is not None:
                vars = e.vars
                if name in vars:
                    break
                e = e.parent
            else:
                raise ScriptRuntimeError(
                    "attempt to compare nil with number", cond_line)
            v = vars[name]
            while True:
                if v.__class__ is not float:
                    raise ScriptRuntimeError(
                        f"attempt to compare {type_name(v)} with number",
                        cond_line)
                if not (v <= limit if inclusive else v < limit):
                    return None
                r = body_c(Environment(env) if scoped else env)
                if r is not None:
                    return r
                v = vars[name]
                if v.__class__ is not float:
                    raise _arith_error(v, step, incr_line)
                v = v + step
                vars[name] = v

        return run

    def unparse(self) -> str:
        return f"while {self.cond.unparse()} do {self.body.unparse()} end"


class ForNum(Node):
    __slots__ = ("name", "start", "stop", "step", "body")

    def __init__(self, name, start, stop, step, body: Block, line: int):
        self.name = name
        self.start = start
        self.stop = stop
        self.step = step  # expr or None (defaults to 1)
        self.body = body
        self.line = line

    def compile_stmt(self):
        name = self.name
        line = self.line
        start_c = self.start.compile()
        stop_c = self.stop.compile()
        step_c = None if self.step is None else self.step.compile()
        body_c = self.body.compile_inline()
        needs_scope = self.body.has_local

        def run(env):
            start = start_c(env)
            stop = stop_c(env)
            step = 1.0 if step_c is None else step_c(env)
            if not (start.__class__ is float and stop.__class__ is float
                    and step.__class__ is float):
                raise ScriptRuntimeError("for bounds must be numbers", line)
            if step == 0.0:
                raise ScriptRuntimeError("for step is zero", line)
            scope = Environment(env)
            svars = scope.vars
            i = start
            if step > 0.0:
                while i <= stop:
                    svars[name] = i
                    r = body_c(Environment(scope) if needs_scope else scope)
                    if r is not None:
                        return r
                    i += step
            else:
                while i >= stop:
                    svars[name] = i
                    r = body_c(Environment(scope) if needs_scope else scope)
                    if r is not None:
                        return r
                    i += step
            return None

        return run

    def unparse(self) -> str:
        head = f"for {self.name} = {self.start.unparse()}, {self.stop.unparse()}"
        if self.step is not None:
            head += f", {self.step.unparse()}"
        return f"{head} do {self.body.unparse()} end"


class ReturnStat(Node):
    __slots__ = ("exprs",)

    def __init__(self, exprs: list, line: int):
        self.exprs = exprs
        self.line = line

    def compile_stmt(self):
        if not self.exprs:
            return lambda env: _EMPTY
        if len(self.exprs) == 1:
            c0 = self.exprs[0].compile()
            return lambda env: [c0(env)]
        codes = tuple(e.compile() for e in self.exprs)
        return lambda env: [c(env) for c in codes]

    def unparse(self) -> str:
        if not self.exprs:
            return "return"
        return "return " + ", ".join(e.unparse() for e in self.exprs)


class Chunk:
    """A parsed program: the top-level statement block."""

    __slots__ = ("block", "_code")

    def __init__(self, block: Block):
        self.block = block
        self._code = None

    def code(self):
        c = self._code
        if c is None:
            c = self.block.compile_scoped()
            self._code = c
        return c

    @property
    def statements(self) -> list:
        return self.block.stmts

    def unparse(self) -> str:
        return self.block.unparse()
