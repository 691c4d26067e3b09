"""Weighted program sets: a program plus choice sites.

A choice site holds a zero-weight default (the original code) and weighted
alternatives contributed by correction rules.  An assignment picks one
alternative per site; instantiating it yields a concrete program whose cost
is the summed weight of every *active* non-default pick (a site is active
only when every enclosing alternative is itself selected).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import lang
from .lang import Span
from .printer import pretty_expr, pretty_program, pretty_stmt


class BadIndex(Exception):
    pass


@dataclass
class Alternative:
    payload: object  # tilde expr / op string / tilde stmt / list of tilde stmts
    rule_id: str | None = None  # None marks the default
    weight: int = 0


@dataclass
class ChoiceSite:
    kind: str  # expr | op | stmt | block
    span: Span
    stmt_span: Span
    alternatives: list
    site_id: int = -1
    parent: tuple | None = None  # (site_id, alt_index) enclosing alternative

    def arity(self) -> int:
        return len(self.alternatives)


@dataclass
class TildeProgram:
    root: object  # Program-shaped tree containing ChoiceSite nodes
    sites: list = field(default_factory=list)
    origin: lang.Program | None = None
    model: object = None  # the ErrorModel the sites came from
    max_rewrite_depth: int = 0

    def site(self, site_id: int) -> ChoiceSite:
        return self.sites[site_id]


@dataclass(frozen=True)
class WeightedCandidate:
    program: lang.Program
    cost: int
    active: frozenset  # canonical (site_id, alt_index) non-default picks


def default_assignment(tilde: TildeProgram) -> dict:
    """All sites at their zero-cost default."""
    return {}


def number_sites(tilde: TildeProgram) -> None:
    """Assign dense pre-order site ids and parent links."""
    sites = []

    def walk(node, parent):
        if isinstance(node, ChoiceSite):
            node.site_id = len(sites)
            node.parent = parent
            sites.append(node)
            for idx, alt in enumerate(node.alternatives):
                walk(alt.payload, (node.site_id, idx))
            return
        if isinstance(node, list):
            for item in node:
                walk(item, parent)
            return
        if isinstance(node, lang.Program):
            for f in node.functions:
                walk(f, parent)
            return
        if isinstance(node, lang.FuncDef):
            walk(node.body, parent)
            return
        for child in _tilde_children(node):
            walk(child, parent)

    walk(tilde.root, None)
    tilde.sites = sites


def _tilde_children(node):
    if isinstance(node, lang.ListLit):
        return node.elements
    if isinstance(node, lang.Index):
        return [node.base, node.index]
    if isinstance(node, lang.Slice):
        return [k for k in (node.base, node.lo, node.hi) if k is not None]
    if isinstance(node, (lang.BinOp, lang.Compare, lang.BoolOp)):
        kids = [node.left]
        if isinstance(node.op, ChoiceSite):
            kids.append(node.op)
        kids.append(node.right)
        return kids
    if isinstance(node, lang.Not):
        return [node.operand]
    if isinstance(node, lang.Call):
        return node.args
    if isinstance(node, lang.CondExpr):
        return [node.body, node.cond, node.orelse]
    if isinstance(node, lang.Assign):
        return [node.target, node.value]
    if isinstance(node, lang.AugAssign):
        kids = [node.target]
        if isinstance(node.op, ChoiceSite):
            kids.append(node.op)
        kids.append(node.value)
        return kids
    if isinstance(node, lang.MethodCall):
        return node.args
    if isinstance(node, lang.Return):
        return [node.value]
    if isinstance(node, lang.If):
        return [node.cond, node.then_body, node.else_body]
    if isinstance(node, lang.While):
        return [node.cond, node.body]
    if isinstance(node, lang.ForIn):
        return [node.iterable, node.body]
    return []


# --------------------------------------------------------------------------
# instantiation


class _Instantiator:
    def __init__(self, assignment: dict, sites: list):
        self.assignment = assignment
        self.sites = sites
        self.cost = 0
        self.active = []

    def pick(self, site: ChoiceSite) -> Alternative:
        idx = self.assignment.get(site.site_id, 0)
        if not 0 <= idx < len(site.alternatives):
            raise BadIndex(f"site {site.site_id}: alternative {idx}")
        alt = site.alternatives[idx]
        if idx != 0:
            self.cost += alt.weight
            self.active.append((site.site_id, idx))
        return alt

    def expr(self, node):
        if isinstance(node, ChoiceSite):
            return self.expr(self.pick(node).payload)
        cls = type(node)
        if cls in (lang.IntLit, lang.BoolLit, lang.Var):
            return node
        if cls is lang.ListLit:
            return lang.ListLit([self.expr(e) for e in node.elements], node.span)
        if cls is lang.Index:
            return lang.Index(self.expr(node.base), self.expr(node.index), node.span)
        if cls is lang.Slice:
            return lang.Slice(
                self.expr(node.base),
                self.expr(node.lo) if node.lo is not None else None,
                self.expr(node.hi) if node.hi is not None else None,
                node.span,
            )
        if cls is lang.BinOp:
            return lang.BinOp(
                self.expr(node.left), self.op(node.op), self.expr(node.right), node.span
            )
        if cls is lang.Compare:
            return lang.Compare(
                self.expr(node.left), self.op(node.op), self.expr(node.right), node.span
            )
        if cls is lang.BoolOp:
            return lang.BoolOp(
                self.expr(node.left), node.op, self.expr(node.right), node.span
            )
        if cls is lang.Not:
            return lang.Not(self.expr(node.operand), node.span)
        if cls is lang.Call:
            return lang.Call(node.func, [self.expr(a) for a in node.args], node.span)
        if cls is lang.CondExpr:
            return lang.CondExpr(
                self.expr(node.body), self.expr(node.cond), self.expr(node.orelse), node.span
            )
        raise TypeError(f"unexpected tilde node {node!r}")

    def op(self, op):
        if isinstance(op, ChoiceSite):
            return self.pick(op).payload
        return op

    def block(self, stmts) -> list:
        if isinstance(stmts, ChoiceSite):
            return self.block(self.pick(stmts).payload)
        out = []
        for s in stmts:
            if isinstance(s, ChoiceSite):
                payload = self.pick(s).payload
                if isinstance(payload, list):
                    out.extend(self.block(payload))
                else:
                    out.append(self.stmt(payload))
            else:
                out.append(self.stmt(s))
        return out

    def stmt(self, node):
        if isinstance(node, ChoiceSite):
            payload = self.pick(node).payload
            return self.stmt(payload)
        cls = type(node)
        if cls is lang.Assign:
            return lang.Assign(self.expr(node.target), self.expr(node.value), node.span)
        if cls is lang.AugAssign:
            return lang.AugAssign(
                self.expr(node.target), self.op(node.op), self.expr(node.value), node.span
            )
        if cls is lang.MethodCall:
            return lang.MethodCall(
                node.obj, node.method, [self.expr(a) for a in node.args], node.span
            )
        if cls is lang.If:
            return lang.If(
                self.expr(node.cond),
                self.block(node.then_body),
                self.block(node.else_body),
                node.span,
            )
        if cls is lang.While:
            return lang.While(self.expr(node.cond), self.block(node.body), node.span)
        if cls is lang.ForIn:
            return lang.ForIn(node.var, self.expr(node.iterable), self.block(node.body), node.span)
        if cls is lang.Return:
            return lang.Return(self.expr(node.value), node.span)
        if cls is lang.Pass:
            return node
        raise TypeError(f"unexpected tilde statement {node!r}")


def instantiate(tilde: TildeProgram, assignment: dict) -> WeightedCandidate:
    """Resolve every site to one alternative; selections at inactive sites
    are never visited, so they contribute neither code nor cost."""
    inst = _Instantiator(assignment, tilde.sites)
    root = tilde.root
    functions = []
    for f in root.functions:
        functions.append(lang.FuncDef(f.name, f.params, inst.block(f.body), f.span))
    program = lang.Program(functions, root.entry, root.source)
    return WeightedCandidate(program, inst.cost, frozenset(inst.active))


def active_pattern(tilde: TildeProgram, assignment: dict) -> frozenset:
    return instantiate(tilde, assignment).active


# --------------------------------------------------------------------------
# enumeration


def max_cost_bound(tilde: TildeProgram) -> int:
    return sum(
        max(alt.weight for alt in site.alternatives) for site in tilde.sites
    )


def enumerate_candidates(tilde: TildeProgram, max_cost=None):
    """Yield (assignment, cost) for every canonical candidate with cost up to
    `max_cost`, in non-decreasing cost order; within one cost the sorted
    sequences of active (site_id, alternative index) picks are emitted in
    lexicographic order.  Inactive sites stay pinned at the default, so each
    active-selection pattern appears exactly once."""
    if max_cost is None:
        max_cost = max_cost_bound(tilde)
    sites = tilde.sites
    n = len(sites)

    def is_active(site, assign) -> bool:
        parent = site.parent
        while parent is not None:
            pid, pidx = parent
            if assign.get(pid, 0) != pidx:
                return False
            parent = sites[pid].parent
        return True

    def rec(start, remaining, assign):
        # extend the current pick set with sites >= start, ascending
        if remaining == 0:
            yield dict(assign)
            return
        for i in range(start, n):
            site = sites[i]
            if not is_active(site, assign):
                continue
            for idx, alt in enumerate(site.alternatives):
                if idx == 0 or alt.weight > remaining:
                    continue
                assign[site.site_id] = idx
                yield from rec(i + 1, remaining - alt.weight, assign)
                del assign[site.site_id]

    for target in range(max_cost + 1):
        for assign in rec(0, target, {}):
            yield assign, target


# --------------------------------------------------------------------------
# debug dump


def dump(tilde: TildeProgram) -> str:
    """Stable text rendering of the choice structure."""
    lines = []
    for f in tilde.root.functions:
        lines.append(f"def {f.name}({', '.join(f.params)}):")
        _dump_block(f.body, 1, lines)
    lines.append("")
    for site in tilde.sites:
        alts = []
        for idx, alt in enumerate(site.alternatives):
            if idx == 0:
                alts.append(_dump_payload(alt.payload))
            else:
                alts.append(f"{_dump_payload(alt.payload)} @{alt.rule_id}:{alt.weight}")
        lines.append(f"site {site.site_id} (line {site.span.line}): {{" + " | ".join(alts) + "}")
    return "\n".join(lines) + "\n"


def _dump_block(stmts, indent, lines):
    if isinstance(stmts, ChoiceSite):
        lines.append("    " * indent + f"<site {stmts.site_id}>")
        return
    for s in stmts:
        _dump_stmt(s, indent, lines)


def _dump_stmt(node, indent, lines):
    pad = "    " * indent
    if isinstance(node, ChoiceSite):
        lines.append(pad + f"<site {node.site_id}>")
        return
    cls = type(node)
    if cls is lang.If:
        lines.append(pad + f"if {_dump_payload(node.cond)}:")
        _dump_block(node.then_body, indent + 1, lines)
        if node.else_body:
            lines.append(pad + "else:")
            _dump_block(node.else_body, indent + 1, lines)
    elif cls is lang.While:
        lines.append(pad + f"while {_dump_payload(node.cond)}:")
        _dump_block(node.body, indent + 1, lines)
    elif cls is lang.ForIn:
        lines.append(pad + f"for {node.var} in {_dump_payload(node.iterable)}:")
        _dump_block(node.body, indent + 1, lines)
    elif cls is lang.Assign:
        lines.append(pad + f"{_dump_payload(node.target)} = {_dump_payload(node.value)}")
    elif cls is lang.AugAssign:
        op = node.op if isinstance(node.op, str) else f"<site {node.op.site_id}>"
        lines.append(pad + f"{_dump_payload(node.target)} {op}= {_dump_payload(node.value)}")
    elif cls is lang.MethodCall:
        args = ", ".join(_dump_payload(a) for a in node.args)
        lines.append(pad + f"{node.obj}.{node.method}({args})")
    elif cls is lang.Return:
        lines.append(pad + f"return {_dump_payload(node.value)}")
    else:
        lines.append(pad + "pass")


def _dump_payload(node) -> str:
    if isinstance(node, ChoiceSite):
        inner = " | ".join(
            _dump_payload(alt.payload)
            + ("" if idx == 0 else f" @{alt.rule_id}")
            for idx, alt in enumerate(node.alternatives)
        )
        return "{" + inner + "}"
    if isinstance(node, str):
        return node
    if isinstance(node, list):
        return "; ".join(_dump_payload(s) for s in node)
    if isinstance(node, lang.Stmt):
        return "; ".join(pretty_stmt(node))  # single-line best effort
    if isinstance(node, lang.Expr):
        return _dump_expr(node)
    return repr(node)


def _dump_expr(node) -> str:
    if isinstance(node, ChoiceSite):
        return _dump_payload(node)
    cls = type(node)
    if cls is lang.Index:
        return f"{_dump_expr(node.base)}[{_dump_expr(node.index)}]"
    if cls is lang.Slice:
        lo = _dump_expr(node.lo) if node.lo is not None else ""
        hi = _dump_expr(node.hi) if node.hi is not None else ""
        return f"{_dump_expr(node.base)}[{lo}:{hi}]"
    if cls is lang.BinOp or cls is lang.Compare:
        op = node.op if isinstance(node.op, str) else _dump_payload(node.op)
        return f"({_dump_expr(node.left)} {op} {_dump_expr(node.right)})"
    if cls is lang.BoolOp:
        return f"({_dump_expr(node.left)} {node.op} {_dump_expr(node.right)})"
    if cls is lang.Not:
        return f"(not {_dump_expr(node.operand)})"
    if cls is lang.Call:
        return f"{node.func}({', '.join(_dump_expr(a) for a in node.args)})"
    if cls is lang.ListLit:
        return "[" + ", ".join(_dump_expr(e) for e in node.elements) + "]"
    if cls is lang.CondExpr:
        return f"({_dump_expr(node.body)} if {_dump_expr(node.cond)} else {_dump_expr(node.orelse)})"
    try:
        return pretty_expr(node)
    except TypeError:
        return repr(node)
