"""Applies an error model to a program, producing its weighted program set.

Every AST node of the entry function is visited.  The default traversal
(alternative 0, cost zero) reproduces the node with rewritten children.  Each
rule whose pattern matches contributes weighted alternatives:

* a rule whose template keeps the matched node's shape ("aligned", e.g.
  ``v[a] -> v[{a + 1, a - 1}]``) grafts a choice site at each changed child
  position, defaulting to the original child;
* any other template becomes a whole-node alternative; choice sets flatten
  into sibling alternatives, and sets nested inside a replacement become
  nested sites whose first element is the local default.

Primed subterms are rewritten recursively (their sites cost extra); unprimed
metavariables are frozen copies of what they matched.  Scope sets expand to
the variables assigned before the enclosing statement, parameters included.
"""

from __future__ import annotations

from . import lang
from .eml import (
    ChoiceSet,
    CorrectionRule,
    ErrorModel,
    FuncPattern,
    IllFormedModel,
    MetaVar,
    OpSet,
    Primed,
    ScopeSet,
    StmtChoice,
    check_well_formed,
    match_pattern,
)
from .tilde import Alternative, ChoiceSite, TildeProgram, number_sites

_COMPARE_FAMILY = ("<", ">", "<=", ">=", "==", "!=")
_ARITH_FAMILY = ("+", "-", "*", "/")


def rewrite(program: lang.Program, model: ErrorModel) -> TildeProgram:
    """Rewrite the entry function of `program` under `model`."""
    violations = check_well_formed(model)
    if violations:
        raise IllFormedModel("; ".join(violations))
    engine = _Engine(program, model)
    root = engine.run()
    tilde = TildeProgram(root, origin=program, model=model)
    tilde.max_rewrite_depth = engine.max_rule_depth
    number_sites(tilde)
    return tilde


class _Engine:
    def __init__(self, program: lang.Program, model: ErrorModel):
        self.program = program
        self.model = model
        self.expr_rules = [r for r in model if r.lhs_kind == "expr"]
        self.stmt_rules = [r for r in model if r.lhs_kind == "stmt"]
        self.func_rules = [r for r in model if r.lhs_kind == "func"]
        self.stmt_header = lang.NO_SPAN
        self.anchor = 0
        self.rule_depth = 0
        self.max_rule_depth = 0
        self.depth_limit = max(lang.size(program), 1)
        entry = program.entry_func()
        self.params = list(entry.params)
        self.first_def = _first_definitions(entry)

    # -- scope ---------------------------------------------------------------

    def scope_names(self) -> list:
        names = list(self.params)
        for name, offset in self.first_def:
            if offset < self.anchor and name not in names:
                names.append(name)
        return names

    # -- top level -----------------------------------------------------------

    def run(self):
        functions = []
        for f in self.program.functions:
            if f.name == self.program.entry:
                functions.append(self.rewrite_func(f))
            else:
                functions.append(f)
        return lang.Program(functions, self.program.entry, self.program.source)

    def rewrite_func(self, func: lang.FuncDef):
        self.stmt_header = func.span
        self.anchor = func.span.start
        body = self.rewrite_block(func.body)
        alternatives = []
        tilde_func = lang.FuncDef(func.name, func.params, body, func.span)
        for rule in self.func_rules:
            binding = match_pattern(rule.lhs, func)
            if binding is None:
                continue
            rhs = rule.rhs
            if isinstance(rhs, FuncPattern) and self._func_aligned(rhs, rule.lhs):
                payload = self._instantiate_block(rhs.body, binding, rule, func.span)
                alternatives.append(Alternative(payload, rule.rule_id, rule.weight))
        if alternatives:
            site = ChoiceSite(
                "block",
                func.span,
                func.span,
                [Alternative(tilde_func.body)] + alternatives,
            )
            tilde_func.body = site
        return tilde_func

    def _func_aligned(self, rhs: FuncPattern, lhs: FuncPattern) -> bool:
        return rhs.name == lhs.name and [p.name for p in rhs.params] == [
            p.name for p in lhs.params
        ]

    # -- statements ------------------------------------------------------------

    def rewrite_block(self, body: list) -> list:
        return [self.rewrite_stmt(s) for s in body]

    def rewrite_stmt(self, stmt: lang.Stmt):
        self.stmt_header = _header_span(stmt)
        self.anchor = stmt.span.start
        default = self._default_stmt(stmt)
        alternatives = []
        for rule in self.stmt_rules:
            binding = match_pattern(rule.lhs, stmt)
            if binding is None:
                continue
            rhs = rule.rhs
            if not isinstance(rhs, (ChoiceSet, StmtChoice)) and self._aligned(
                rhs, rule.lhs
            ):
                self._graft(default, rhs, rule.lhs, binding, rule)
                continue
            elements = rhs.options if isinstance(rhs, (ChoiceSet, StmtChoice)) else [rhs]
            for elem in elements:
                for payload in self._element_variants(elem, binding, rule, stmt.span):
                    alternatives.append(Alternative(payload, rule.rule_id, rule.weight))
            # restore statement context clobbered by nested rewrites
            self.stmt_header = _header_span(stmt)
            self.anchor = stmt.span.start
        if alternatives:
            return ChoiceSite(
                "stmt",
                stmt.span,
                self.stmt_header,
                [Alternative(default)] + alternatives,
            )
        return default

    def _default_stmt(self, stmt: lang.Stmt):
        cls = type(stmt)
        if cls is lang.Assign:
            return lang.Assign(
                self.rewrite_expr(stmt.target), self.rewrite_expr(stmt.value), stmt.span
            )
        if cls is lang.AugAssign:
            return lang.AugAssign(
                self.rewrite_expr(stmt.target),
                stmt.op,
                self.rewrite_expr(stmt.value),
                stmt.span,
                stmt.op_span,
            )
        if cls is lang.MethodCall:
            return lang.MethodCall(
                stmt.obj, stmt.method, [self.rewrite_expr(a) for a in stmt.args], stmt.span
            )
        if cls is lang.If:
            cond = self.rewrite_expr(stmt.cond)
            then_body = self.rewrite_block(stmt.then_body)
            else_body = self.rewrite_block(stmt.else_body)
            return lang.If(cond, then_body, else_body, stmt.span)
        if cls is lang.While:
            cond = self.rewrite_expr(stmt.cond)
            return lang.While(cond, self.rewrite_block(stmt.body), stmt.span)
        if cls is lang.ForIn:
            iterable = self.rewrite_expr(stmt.iterable)
            return lang.ForIn(stmt.var, iterable, self.rewrite_block(stmt.body), stmt.span)
        if cls is lang.Return:
            return lang.Return(self.rewrite_expr(stmt.value), stmt.span)
        if cls is lang.Pass:
            return stmt
        raise TypeError(f"cannot rewrite {stmt!r}")

    # -- expressions ------------------------------------------------------------

    def rewrite_expr(self, node: lang.Expr):
        default = self._default_expr(node)
        alternatives = []
        for rule in self.expr_rules:
            binding = match_pattern(rule.lhs, node)
            if binding is None:
                continue
            rhs = rule.rhs
            if not isinstance(rhs, ChoiceSet) and self._aligned(rhs, rule.lhs):
                self._graft(default, rhs, rule.lhs, binding, rule)
                continue
            elements = rhs.options if isinstance(rhs, ChoiceSet) else [rhs]
            for elem in elements:
                for payload in self._element_variants(elem, binding, rule, node.span):
                    alternatives.append(Alternative(payload, rule.rule_id, rule.weight))
        if alternatives:
            return ChoiceSite(
                "expr",
                node.span,
                self.stmt_header,
                [Alternative(default)] + alternatives,
            )
        return default

    def _default_expr(self, node: lang.Expr):
        cls = type(node)
        if cls in (lang.IntLit, lang.BoolLit, lang.Var):
            return node
        if cls is lang.ListLit:
            return lang.ListLit([self.rewrite_expr(e) for e in node.elements], node.span)
        if cls is lang.Index:
            return lang.Index(
                self.rewrite_expr(node.base), self.rewrite_expr(node.index), node.span
            )
        if cls is lang.Slice:
            return lang.Slice(
                self.rewrite_expr(node.base),
                self.rewrite_expr(node.lo) if node.lo is not None else None,
                self.rewrite_expr(node.hi) if node.hi is not None else None,
                node.span,
            )
        if cls is lang.BinOp:
            return lang.BinOp(
                self.rewrite_expr(node.left), node.op, self.rewrite_expr(node.right),
                node.span, node.op_span,
            )
        if cls is lang.Compare:
            return lang.Compare(
                self.rewrite_expr(node.left), node.op, self.rewrite_expr(node.right),
                node.span, node.op_span,
            )
        if cls is lang.BoolOp:
            return lang.BoolOp(
                self.rewrite_expr(node.left), node.op, self.rewrite_expr(node.right), node.span
            )
        if cls is lang.Not:
            return lang.Not(self.rewrite_expr(node.operand), node.span)
        if cls is lang.Call:
            return lang.Call(node.func, [self.rewrite_expr(a) for a in node.args], node.span)
        if cls is lang.CondExpr:
            return lang.CondExpr(
                self.rewrite_expr(node.body),
                self.rewrite_expr(node.cond),
                self.rewrite_expr(node.orelse),
                node.span,
            )
        raise TypeError(f"cannot rewrite {node!r}")

    # -- alignment and grafting --------------------------------------------------

    def _aligned(self, rhs, lhs) -> bool:
        rhs = _strip_prime(rhs)
        if isinstance(lhs, (MetaVar, Primed)):
            return False
        if type(rhs) is not type(lhs):
            return False
        if isinstance(lhs, lang.Call):
            return rhs.func == lhs.func and len(rhs.args) == len(lhs.args)
        if isinstance(lhs, lang.MethodCall):
            return rhs.obj == lhs.obj and rhs.method == lhs.method and len(
                rhs.args
            ) == len(lhs.args)
        if isinstance(lhs, lang.ListLit):
            return len(rhs.elements) == len(lhs.elements)
        if isinstance(lhs, lang.Slice):
            return (rhs.lo is None) == (lhs.lo is None) and (rhs.hi is None) == (
                lhs.hi is None
            )
        return isinstance(
            lhs,
            (
                lang.Index,
                lang.BinOp,
                lang.Compare,
                lang.BoolOp,
                lang.Not,
                lang.CondExpr,
                lang.Assign,
                lang.AugAssign,
                lang.Return,
            ),
        )

    def _graft(self, default, rhs, lhs, binding, rule) -> None:
        rhs = _strip_prime(rhs)
        for field, lhs_child, rhs_child in _child_slots(lhs, rhs):
            if _template_key(_strip_prime(rhs_child)) == _template_key(lhs_child):
                continue
            if field == "op":
                options = self._op_options(rhs_child, binding, rule)
                self._graft_site(default, field, options, rule, kind="op")
            else:
                current = _get_slot(default, field)
                anchor = getattr(current, "span", None) or default.span
                options = self._position_options(rhs_child, binding, rule, anchor)
                self._graft_site(default, field, options, rule, kind="expr")

    def _graft_site(self, default, field, options, rule, kind) -> None:
        if not options:
            return  # e.g. a scope set with nothing in scope
        current = _get_slot(default, field)
        if isinstance(current, ChoiceSite):
            current.alternatives.extend(
                Alternative(p, rule.rule_id, rule.weight) for p in options
            )
            return
        if kind == "op":
            span = getattr(default, "op_span", lang.NO_SPAN)
            if span is lang.NO_SPAN or span.end == 0:
                span = default.span
        else:
            span = getattr(current, "span", None) or default.span
        site = ChoiceSite(
            kind,
            span,
            self.stmt_header,
            [Alternative(current)]
            + [Alternative(p, rule.rule_id, rule.weight) for p in options],
        )
        _set_slot(default, field, site)

    def _op_options(self, tpl, binding, rule) -> list:
        if isinstance(tpl, OpSet):
            original = binding[tpl.of]
            family = _COMPARE_FAMILY if original in _COMPARE_FAMILY else _ARITH_FAMILY
            return [op for op in family if op != original]
        if isinstance(tpl, MetaVar):
            return [binding[tpl.name]]
        return [tpl]  # literal operator

    def _position_options(self, tpl, binding, rule, anchor) -> list:
        """Alternatives for one grafted child position."""
        if isinstance(tpl, ChoiceSet):
            options = []
            for o in tpl.options:
                options.extend(self._element_variants(o, binding, rule, anchor))
            return options
        return self._element_variants(tpl, binding, rule, anchor)

    def _element_variants(self, tpl, binding, rule, anchor) -> list:
        """A set element (or whole replacement) as concrete payloads; scope
        sets at element level expand one payload per variable in scope."""
        if isinstance(tpl, ScopeSet):
            return [lang.Var(name) for name in self._scope_options(tpl, binding)]
        return [self._instantiate(tpl, binding, rule, anchor)]

    def _scope_options(self, tpl: ScopeSet, binding) -> list:
        bound = binding.get(tpl.of)
        exclude = bound.name if isinstance(bound, lang.Var) else None
        return [name for name in self.scope_names() if name != exclude]

    # -- template instantiation ---------------------------------------------------

    def _instantiate(self, tpl, binding, rule, anchor=lang.NO_SPAN):
        if isinstance(tpl, MetaVar):
            bound = binding[tpl.name]
            return bound  # frozen: shared original fragment
        if isinstance(tpl, Primed):
            return self._rewrite_primed(tpl.inner, binding)
        if isinstance(tpl, ChoiceSet):
            variants = []
            for o in tpl.options:
                variants.extend(self._element_variants(o, binding, rule, anchor))
            default = variants[0]
            rest = variants[1:]
            return ChoiceSite(
                "expr",
                anchor,
                self.stmt_header,
                [Alternative(default)]
                + [Alternative(v, rule.rule_id, rule.weight) for v in rest],
            )
        if isinstance(tpl, ScopeSet):
            bound = binding.get(tpl.of)
            options = [lang.Var(n) for n in self._scope_options(tpl, binding)]
            default = bound if bound is not None else lang.Var(tpl.of)
            if not options:
                return default
            return ChoiceSite(
                "expr",
                anchor,
                self.stmt_header,
                [Alternative(default)]
                + [Alternative(v, rule.rule_id, rule.weight) for v in options],
            )
        cls = type(tpl)
        if cls in (lang.IntLit, lang.BoolLit, lang.Var):
            return tpl
        if cls is lang.ListLit:
            return lang.ListLit(
                [self._instantiate(e, binding, rule, anchor) for e in tpl.elements], tpl.span
            )
        if cls is lang.Index:
            return lang.Index(
                self._instantiate(tpl.base, binding, rule, anchor),
                self._instantiate(tpl.index, binding, rule, anchor),
                tpl.span,
            )
        if cls is lang.Slice:
            return lang.Slice(
                self._instantiate(tpl.base, binding, rule, anchor),
                self._instantiate(tpl.lo, binding, rule, anchor) if tpl.lo is not None else None,
                self._instantiate(tpl.hi, binding, rule, anchor) if tpl.hi is not None else None,
                tpl.span,
            )
        if cls in (lang.BinOp, lang.Compare):
            op = tpl.op
            if isinstance(op, MetaVar):
                op = binding[op.name]
            elif isinstance(op, OpSet):
                original = binding[op.of]
                family = (
                    _COMPARE_FAMILY if original in _COMPARE_FAMILY else _ARITH_FAMILY
                )
                op = ChoiceSite(
                    "op",
                    anchor,
                    self.stmt_header,
                    [Alternative(original)]
                    + [
                        Alternative(o, rule.rule_id, rule.weight)
                        for o in family
                        if o != original
                    ],
                )
            return cls(
                self._instantiate(tpl.left, binding, rule, anchor),
                op,
                self._instantiate(tpl.right, binding, rule, anchor),
                tpl.span,
            )
        if cls is lang.BoolOp:
            return lang.BoolOp(
                self._instantiate(tpl.left, binding, rule, anchor),
                tpl.op,
                self._instantiate(tpl.right, binding, rule, anchor),
                tpl.span,
            )
        if cls is lang.Not:
            return lang.Not(self._instantiate(tpl.operand, binding, rule, anchor), tpl.span)
        if cls is lang.Call:
            return lang.Call(
                tpl.func, [self._instantiate(a, binding, rule, anchor) for a in tpl.args], tpl.span
            )
        if cls is lang.CondExpr:
            return lang.CondExpr(
                self._instantiate(tpl.body, binding, rule, anchor),
                self._instantiate(tpl.cond, binding, rule, anchor),
                self._instantiate(tpl.orelse, binding, rule, anchor),
                tpl.span,
            )
        if cls is lang.Assign:
            return lang.Assign(
                self._instantiate(tpl.target, binding, rule, anchor),
                self._instantiate(tpl.value, binding, rule, anchor),
                tpl.span,
            )
        if cls is lang.AugAssign:
            op = tpl.op
            if isinstance(op, MetaVar):
                op = binding[op.name]
            return lang.AugAssign(
                self._instantiate(tpl.target, binding, rule, anchor),
                op,
                self._instantiate(tpl.value, binding, rule, anchor),
                tpl.span,
            )
        if cls is lang.Return:
            return lang.Return(self._instantiate(tpl.value, binding, rule, anchor), tpl.span)
        if cls is lang.Pass:
            return tpl
        if cls is lang.If:
            return lang.If(
                self._instantiate(tpl.cond, binding, rule, anchor),
                self._instantiate_block(tpl.then_body, binding, rule, anchor),
                self._instantiate_block(tpl.else_body, binding, rule, anchor),
                tpl.span,
            )
        if cls is lang.While:
            return lang.While(
                self._instantiate(tpl.cond, binding, rule, anchor),
                self._instantiate_block(tpl.body, binding, rule, anchor),
                tpl.span,
            )
        raise TypeError(f"cannot instantiate template {tpl!r}")

    def _instantiate_block(self, body, binding, rule, anchor=lang.NO_SPAN) -> list:
        out = []
        for item in body:
            if isinstance(item, MetaVar) and item.kind == "s":
                out.extend(binding[item.name])  # frozen statement block
            else:
                out.append(self._instantiate(item, binding, rule, anchor))
        return out

    def _rewrite_primed(self, inner, binding):
        if isinstance(inner, MetaVar):
            target = binding[inner.name]
        else:
            target = _concretize(inner, binding)
        self.rule_depth += 1
        self.max_rule_depth = max(self.max_rule_depth, self.rule_depth)
        if self.rule_depth > self.depth_limit:
            raise IllFormedModel("rewrite recursion exceeded the termination bound")
        try:
            if isinstance(target, list):
                return self.rewrite_block(target)
            if isinstance(target, lang.Stmt):
                return self.rewrite_stmt(target)
            return self.rewrite_expr(target)
        finally:
            self.rule_depth -= 1


# --------------------------------------------------------------------------
# helpers


def _first_definitions(func: lang.FuncDef) -> list:
    defs = []

    def walk(body):
        for s in body:
            if isinstance(s, (lang.Assign, lang.AugAssign)) and isinstance(
                s.target, lang.Var
            ):
                defs.append((s.span.start, s.target.name))
            elif isinstance(s, lang.ForIn):
                defs.append((s.span.start, s.var))
                walk(s.body)
            elif isinstance(s, lang.If):
                walk(s.then_body)
                walk(s.else_body)
            elif isinstance(s, lang.While):
                walk(s.body)

    walk(func.body)
    first = []
    seen = set(func.params)
    for offset, name in sorted(defs):
        if name not in seen:
            seen.add(name)
            first.append((name, offset))
    return first


def _header_span(stmt: lang.Stmt) -> lang.Span:
    if isinstance(stmt, (lang.If, lang.While)):
        return lang.Span(
            stmt.span.line, stmt.span.col, stmt.span.start, stmt.cond.span.end
        )
    if isinstance(stmt, lang.ForIn):
        return lang.Span(
            stmt.span.line, stmt.span.col, stmt.span.start, stmt.iterable.span.end
        )
    return stmt.span


def _strip_prime(node):
    return node.inner if isinstance(node, Primed) else node


def _child_slots(lhs, rhs):
    """Paired child positions of an aligned pattern/template."""
    cls = type(lhs)
    if cls is lang.Index:
        return [("base", lhs.base, rhs.base), ("index", lhs.index, rhs.index)]
    if cls is lang.Slice:
        slots = [("base", lhs.base, rhs.base)]
        if lhs.lo is not None:
            slots.append(("lo", lhs.lo, rhs.lo))
        if lhs.hi is not None:
            slots.append(("hi", lhs.hi, rhs.hi))
        return slots
    if cls in (lang.BinOp, lang.Compare):
        return [
            ("left", lhs.left, rhs.left),
            ("op", lhs.op, rhs.op),
            ("right", lhs.right, rhs.right),
        ]
    if cls is lang.BoolOp:
        return [("left", lhs.left, rhs.left), ("right", lhs.right, rhs.right)]
    if cls is lang.Not:
        return [("operand", lhs.operand, rhs.operand)]
    if cls is lang.Call:
        return [(("args", i), a, b) for i, (a, b) in enumerate(zip(lhs.args, rhs.args))]
    if cls is lang.MethodCall:
        return [(("args", i), a, b) for i, (a, b) in enumerate(zip(lhs.args, rhs.args))]
    if cls is lang.ListLit:
        return [
            (("elements", i), a, b)
            for i, (a, b) in enumerate(zip(lhs.elements, rhs.elements))
        ]
    if cls is lang.CondExpr:
        return [
            ("body", lhs.body, rhs.body),
            ("cond", lhs.cond, rhs.cond),
            ("orelse", lhs.orelse, rhs.orelse),
        ]
    if cls is lang.Assign:
        return [("target", lhs.target, rhs.target), ("value", lhs.value, rhs.value)]
    if cls is lang.AugAssign:
        return [
            ("target", lhs.target, rhs.target),
            ("op", lhs.op, rhs.op),
            ("value", lhs.value, rhs.value),
        ]
    if cls is lang.Return:
        return [("value", lhs.value, rhs.value)]
    raise TypeError(f"cannot align {lhs!r}")


def _get_slot(node, field):
    if isinstance(field, tuple):
        attr, i = field
        return getattr(node, attr)[i]
    return getattr(node, field)


def _set_slot(node, field, value):
    if isinstance(field, tuple):
        attr, i = field
        getattr(node, attr)[i] = value
    else:
        setattr(node, field, value)


def _template_key(node):
    if isinstance(node, MetaVar):
        return ("meta", node.name)
    if isinstance(node, Primed):
        return _template_key(node.inner)
    if isinstance(node, ScopeSet):
        return ("scopeset", node.of)
    if isinstance(node, OpSet):
        return ("opset", node.of)
    if isinstance(node, ChoiceSet):
        return ("choice",) + tuple(_template_key(o) for o in node.options)
    if isinstance(node, str) or node is None:
        return node
    cls = type(node)
    if cls is lang.IntLit:
        return ("int", node.value)
    if cls is lang.BoolLit:
        return ("bool", node.value)
    if cls is lang.Var:
        return ("var", node.name)
    if cls is lang.ListLit:
        return ("list",) + tuple(_template_key(e) for e in node.elements)
    if cls is lang.Index:
        return ("index", _template_key(node.base), _template_key(node.index))
    if cls is lang.Slice:
        return (
            "slice",
            _template_key(node.base),
            _template_key(node.lo),
            _template_key(node.hi),
        )
    if cls in (lang.BinOp, lang.Compare):
        return (
            cls.__name__,
            _template_key(node.op),
            _template_key(node.left),
            _template_key(node.right),
        )
    if cls is lang.BoolOp:
        return ("boolop", node.op, _template_key(node.left), _template_key(node.right))
    if cls is lang.Not:
        return ("not", _template_key(node.operand))
    if cls is lang.Call:
        return ("call", node.func) + tuple(_template_key(a) for a in node.args)
    if cls is lang.CondExpr:
        return (
            "condexpr",
            _template_key(node.body),
            _template_key(node.cond),
            _template_key(node.orelse),
        )
    raise TypeError(f"no template key for {node!r}")


def _concretize(tpl, binding):
    """Instantiate a primed group as a plain fragment (no template forms)."""
    if isinstance(tpl, MetaVar):
        return binding[tpl.name]
    if isinstance(tpl, (ChoiceSet, ScopeSet, OpSet, Primed)):
        raise IllFormedModel("nested template forms inside a primed group")
    cls = type(tpl)
    if cls in (lang.IntLit, lang.BoolLit, lang.Var, lang.Pass):
        return tpl
    if cls is lang.ListLit:
        return lang.ListLit([_concretize(e, binding) for e in tpl.elements], tpl.span)
    if cls is lang.Index:
        return lang.Index(
            _concretize(tpl.base, binding), _concretize(tpl.index, binding), tpl.span
        )
    if cls in (lang.BinOp, lang.Compare):
        op = tpl.op
        if isinstance(op, MetaVar):
            op = binding[op.name]
        return cls(
            _concretize(tpl.left, binding), op, _concretize(tpl.right, binding), tpl.span
        )
    if cls is lang.Call:
        return lang.Call(tpl.func, [_concretize(a, binding) for a in tpl.args], tpl.span)
    if cls is lang.Return:
        return lang.Return(_concretize(tpl.value, binding), tpl.span)
    raise TypeError(f"cannot concretize {tpl!r}")
