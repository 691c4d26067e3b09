"""AST for the mini imperative source language.

Programs are a list of function definitions over a dynamically typed value
domain (fixed-width ints, bools, lists, tuples).  Every node carries a source
span so downstream tooling can anchor diagnostics to the original text.
"""

from __future__ import annotations

from dataclasses import dataclass, field

ARITH_OPS = ("+", "-", "*", "/", "**")
COMPARE_OPS = ("==", "!=", "<", ">", "<=", ">=")
BOOL_OPS = ("and", "or")
AUG_OPS = ("+=", "-=", "*=", "/=")


@dataclass(frozen=True)
class Span:
    line: int = 0  # 1-based
    col: int = 0  # 1-based
    start: int = 0  # offset into the source text
    end: int = 0

    def text(self, source: str) -> str:
        return source[self.start : self.end]


NO_SPAN = Span()


class Node:
    """Base class for expressions and statements."""

    span: Span

    def key(self):
        """Span-insensitive structural identity (used for equality tests,
        nonlinear pattern matching and candidate fingerprinting)."""
        raise NotImplementedError

    def same(self, other: "Node") -> bool:
        return self.key() == other.key()


# --------------------------------------------------------------------------
# expressions


class Expr(Node):
    pass


@dataclass
class IntLit(Expr):
    value: int
    span: Span = NO_SPAN

    def key(self):
        return ("int", self.value)


@dataclass
class BoolLit(Expr):
    value: bool
    span: Span = NO_SPAN

    def key(self):
        return ("bool", self.value)


@dataclass
class ListLit(Expr):
    elements: list
    span: Span = NO_SPAN

    def key(self):
        return ("list",) + tuple(e.key() for e in self.elements)


@dataclass
class Var(Expr):
    name: str
    span: Span = NO_SPAN

    def key(self):
        return ("var", self.name)


@dataclass
class Index(Expr):
    base: Expr
    index: Expr
    span: Span = NO_SPAN

    def key(self):
        return ("index", self.base.key(), self.index.key())


@dataclass
class Slice(Expr):
    base: Expr
    lo: Expr | None
    hi: Expr | None
    span: Span = NO_SPAN

    def key(self):
        return (
            "slice",
            self.base.key(),
            self.lo.key() if self.lo else None,
            self.hi.key() if self.hi else None,
        )


@dataclass
class BinOp(Expr):
    left: Expr
    op: str
    right: Expr
    span: Span = NO_SPAN
    op_span: Span = NO_SPAN

    def key(self):
        return ("binop", self.op, self.left.key(), self.right.key())


@dataclass
class Compare(Expr):
    left: Expr
    op: str
    right: Expr
    span: Span = NO_SPAN
    op_span: Span = NO_SPAN

    def key(self):
        return ("compare", self.op, self.left.key(), self.right.key())


@dataclass
class BoolOp(Expr):
    left: Expr
    op: str  # "and" | "or"
    right: Expr
    span: Span = NO_SPAN

    def key(self):
        return ("boolop", self.op, self.left.key(), self.right.key())


@dataclass
class Not(Expr):
    operand: Expr
    span: Span = NO_SPAN

    def key(self):
        return ("not", self.operand.key())


@dataclass
class Call(Expr):
    func: str
    args: list
    span: Span = NO_SPAN

    def key(self):
        return ("call", self.func) + tuple(a.key() for a in self.args)


@dataclass
class CondExpr(Expr):
    # "body if cond else orelse", evaluated lazily like Python's ternary
    body: Expr
    cond: Expr
    orelse: Expr
    span: Span = NO_SPAN

    def key(self):
        return ("condexpr", self.body.key(), self.cond.key(), self.orelse.key())


# --------------------------------------------------------------------------
# statements


class Stmt(Node):
    pass


@dataclass
class Assign(Stmt):
    target: Expr  # Var or Index
    value: Expr
    span: Span = NO_SPAN

    def key(self):
        return ("assign", self.target.key(), self.value.key())


@dataclass
class AugAssign(Stmt):
    target: Expr  # Var or Index
    op: str  # one of AUG_OPS
    value: Expr
    span: Span = NO_SPAN
    op_span: Span = NO_SPAN

    def key(self):
        return ("augassign", self.op, self.target.key(), self.value.key())


@dataclass
class MethodCall(Stmt):
    """Statement-level method call; only list mutators (``x.append(e)``)."""

    obj: str
    method: str
    args: list
    span: Span = NO_SPAN

    def key(self):
        return ("methodcall", self.obj, self.method) + tuple(
            a.key() for a in self.args
        )


@dataclass
class If(Stmt):
    cond: Expr
    then_body: list
    else_body: list  # may be empty
    span: Span = NO_SPAN

    def key(self):
        return (
            "if",
            self.cond.key(),
            tuple(s.key() for s in self.then_body),
            tuple(s.key() for s in self.else_body),
        )


@dataclass
class While(Stmt):
    cond: Expr
    body: list
    span: Span = NO_SPAN

    def key(self):
        return ("while", self.cond.key(), tuple(s.key() for s in self.body))


@dataclass
class ForIn(Stmt):
    var: str
    iterable: Expr
    body: list
    span: Span = NO_SPAN

    def key(self):
        return (
            "for",
            self.var,
            self.iterable.key(),
            tuple(s.key() for s in self.body),
        )


@dataclass
class Return(Stmt):
    value: Expr
    span: Span = NO_SPAN

    def key(self):
        return ("return", self.value.key())


@dataclass
class Pass(Stmt):
    span: Span = NO_SPAN

    def key(self):
        return ("pass",)


# --------------------------------------------------------------------------
# top level


@dataclass
class FuncDef:
    name: str
    params: list  # parameter names as written (type suffixes included)
    body: list
    span: Span = NO_SPAN

    def key(self):
        return (
            "def",
            self.name,
            tuple(self.params),
            tuple(s.key() for s in self.body),
        )


@dataclass
class Program:
    functions: list
    entry: str  # name of the entry function
    source: str = ""

    def key(self):
        return ("program", self.entry) + tuple(f.key() for f in self.functions)

    def entry_func(self) -> FuncDef:
        for f in self.functions:
            if f.name == self.entry:
                return f
        raise KeyError(self.entry)

    def func(self, name: str) -> FuncDef | None:
        for f in self.functions:
            if f.name == name:
                return f
        return None


def walk_exprs(node):
    """Yield every expression node reachable from an AST fragment."""
    if isinstance(node, Program):
        for f in node.functions:
            yield from walk_exprs(f)
    elif isinstance(node, FuncDef):
        for s in node.body:
            yield from walk_exprs(s)
    elif isinstance(node, Stmt):
        if isinstance(node, Assign):
            yield from walk_exprs(node.target)
            yield from walk_exprs(node.value)
        elif isinstance(node, AugAssign):
            yield from walk_exprs(node.target)
            yield from walk_exprs(node.value)
        elif isinstance(node, MethodCall):
            for a in node.args:
                yield from walk_exprs(a)
        elif isinstance(node, If):
            yield from walk_exprs(node.cond)
            for s in node.then_body + node.else_body:
                yield from walk_exprs(s)
        elif isinstance(node, While):
            yield from walk_exprs(node.cond)
            for s in node.body:
                yield from walk_exprs(s)
        elif isinstance(node, ForIn):
            yield from walk_exprs(node.iterable)
            for s in node.body:
                yield from walk_exprs(s)
        elif isinstance(node, Return):
            yield from walk_exprs(node.value)
    elif isinstance(node, Expr):
        yield node
        if isinstance(node, ListLit):
            kids = node.elements
        elif isinstance(node, Index):
            kids = [node.base, node.index]
        elif isinstance(node, Slice):
            kids = [k for k in (node.base, node.lo, node.hi) if k]
        elif isinstance(node, (BinOp, Compare, BoolOp)):
            kids = [node.left, node.right]
        elif isinstance(node, Not):
            kids = [node.operand]
        elif isinstance(node, Call):
            kids = node.args
        elif isinstance(node, CondExpr):
            kids = [node.body, node.cond, node.orelse]
        else:
            kids = []
        for k in kids:
            yield from walk_exprs(k)


def size(node) -> int:
    """Number of syntax-tree nodes in a fragment (statements included)."""
    if isinstance(node, Program):
        return sum(size(f) for f in node.functions)
    if isinstance(node, FuncDef):
        return 1 + sum(size(s) for s in node.body)
    if isinstance(node, list):
        return sum(size(s) for s in node)
    if isinstance(node, (Assign, AugAssign)):
        return 1 + size(node.target) + size(node.value)
    if isinstance(node, MethodCall):
        return 1 + sum(size(a) for a in node.args)
    if isinstance(node, If):
        return 1 + size(node.cond) + size(node.then_body) + size(node.else_body)
    if isinstance(node, While):
        return 1 + size(node.cond) + size(node.body)
    if isinstance(node, ForIn):
        return 2 + size(node.iterable) + size(node.body)
    if isinstance(node, Return):
        return 1 + size(node.value)
    if isinstance(node, Pass):
        return 1
    if isinstance(node, ListLit):
        return 1 + sum(size(e) for e in node.elements)
    if isinstance(node, Index):
        return 1 + size(node.base) + size(node.index)
    if isinstance(node, Slice):
        return 1 + size(node.base) + sum(size(e) for e in (node.lo, node.hi) if e)
    if isinstance(node, (BinOp, Compare, BoolOp)):
        return 1 + size(node.left) + size(node.right)
    if isinstance(node, Not):
        return 1 + size(node.operand)
    if isinstance(node, Call):
        return 1 + sum(size(a) for a in node.args)
    if isinstance(node, CondExpr):
        return 1 + size(node.body) + size(node.cond) + size(node.orelse)
    return 1
