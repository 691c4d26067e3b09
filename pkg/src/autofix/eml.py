"""Correction rules: parsing, validation and pattern matching.

A rule file holds ordered rewrite rules::

    rule IndF weight 1: v[a] -> v[{a + 1, a - 1, ?a}] msg "..."

The left side is a program fragment over metavariables (stem gives the kind:
``a``/``b`` any expression, ``v`` variable, ``n`` int literal, ``s``
statement block, ``cop``/``aop`` operators).  The right side is a template
over the same metavariables extended with choice sets ``{e1, e2}``, scope
sets ``?a`` (every variable in scope), operator sets ``~cop`` and a trailing
prime mark on subterms that are rewritten recursively.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import lang
from .lexer import SourceError, tokenize
from .parser import Parser

META_KINDS = ("a", "b", "v", "n", "s", "cop", "aop")


class DuplicateRuleId(Exception):
    pass


class IllFormedModel(Exception):
    pass


# --------------------------------------------------------------------------
# template-only nodes (live inside lang trees in patterns/templates)


@dataclass
class MetaVar(lang.Expr):
    name: str
    kind: str = "a"
    span: lang.Span = lang.NO_SPAN

    def key(self):
        return ("meta", self.name)


@dataclass
class Primed(lang.Expr):
    """Subterm rewritten recursively after rule application."""

    inner: object
    span: lang.Span = lang.NO_SPAN

    def key(self):
        return ("primed", self.inner.key())


@dataclass
class ChoiceSet(lang.Expr):
    options: list
    span: lang.Span = lang.NO_SPAN

    def key(self):
        return ("choice",) + tuple(o.key() for o in self.options)


@dataclass
class ScopeSet(lang.Expr):
    """``?a``: the set of all variables in scope at the rewrite location."""

    of: str  # metavariable name the set is anchored to
    span: lang.Span = lang.NO_SPAN

    def key(self):
        return ("scopeset", self.of)


@dataclass
class OpSet(lang.Expr):
    """``~cop``: every operator of the matched operator's family."""

    of: str
    span: lang.Span = lang.NO_SPAN

    def key(self):
        return ("opset", self.of)


@dataclass
class StmtChoice(lang.Stmt):
    options: list
    span: lang.Span = lang.NO_SPAN

    def key(self):
        return ("stmtchoice",) + tuple(o.key() for o in self.options)


@dataclass
class FuncPattern:
    """Pattern/template over a whole function definition."""

    name: str
    params: list  # MetaVars
    body: list  # statement templates; a bare s-metavar stands for the block
    span: lang.Span = lang.NO_SPAN

    def key(self):
        return ("funcpat", self.name, tuple(p.key() for p in self.params),
                tuple(s.key() for s in self.body))


def meta_kind(name: str):
    stem = name.rstrip("0123456789")
    return stem if stem in META_KINDS else None


# --------------------------------------------------------------------------
# rules


@dataclass
class CorrectionRule:
    rule_id: str
    lhs: object
    rhs: object
    weight: int = 1
    message: str | None = None
    lhs_kind: str = "expr"  # expr | stmt | func

    def lhs_metavars(self) -> dict:
        return collect_metavars(self.lhs)


@dataclass
class ErrorModel:
    rules: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.rules)


def collect_metavars(node, into=None) -> dict:
    """Map metavar name -> occurrence count within a fragment."""
    if into is None:
        into = {}
    if isinstance(node, MetaVar):
        into[node.name] = into.get(node.name, 0) + 1
        return into
    if isinstance(node, (ScopeSet, OpSet)):
        into.setdefault(node.of, into.get(node.of, 0))
        return into
    if isinstance(node, Primed):
        return collect_metavars(node.inner, into)
    for child in _children(node):
        collect_metavars(child, into)
    return into


def _children(node):
    if isinstance(node, (ChoiceSet, StmtChoice)):
        return node.options
    if isinstance(node, FuncPattern):
        return list(node.params) + list(node.body)
    if isinstance(node, lang.ListLit):
        return node.elements
    if isinstance(node, lang.Index):
        return [node.base, node.index]
    if isinstance(node, lang.Slice):
        return [k for k in (node.base, node.lo, node.hi) if k is not None]
    if isinstance(node, (lang.BinOp, lang.Compare, lang.BoolOp)):
        kids = [node.left, node.right]
        if isinstance(node.op, (MetaVar, OpSet)):
            kids.append(node.op)
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
        kids = [node.target, node.value]
        if isinstance(node.op, (MetaVar, OpSet)):
            kids.append(node.op)
        return kids
    if isinstance(node, lang.MethodCall):
        return node.args
    if isinstance(node, lang.Return):
        return [node.value]
    if isinstance(node, lang.If):
        return [node.cond] + node.then_body + node.else_body
    if isinstance(node, lang.While):
        return [node.cond] + node.body
    if isinstance(node, lang.ForIn):
        return [node.iterable] + node.body
    return []


def template_size(node) -> int:
    """Syntax-tree size with metavariables counted as single nodes."""
    if isinstance(node, (MetaVar, ScopeSet, OpSet)):
        return 1
    if isinstance(node, Primed):
        return template_size(node.inner)
    if isinstance(node, str) or node is None:
        return 0
    kids = _children(node)
    if isinstance(node, (ChoiceSet, StmtChoice)):
        return max((template_size(k) for k in kids), default=1)
    extra = 1 if isinstance(node, lang.ForIn) else 0
    return 1 + extra + sum(template_size(k) for k in kids)


def primed_subterms(node):
    if isinstance(node, Primed):
        yield node.inner
        return  # primes do not nest
    for child in _children(node):
        yield from primed_subterms(child)


def check_well_formed(model: ErrorModel) -> list:
    """Return violations (empty when the model is well-formed).

    A rule is well-formed when every primed right-side subterm is a strictly
    smaller syntax tree than the left side and repeats no metavariable more
    often than the left side does (the second condition keeps instantiated
    subterms shrinking even for duplicating templates)."""
    violations = []
    for rule in model:
        lhs_size = template_size(rule.lhs)
        lhs_counts = rule.lhs_metavars()
        for sub in primed_subterms(rule.rhs):
            if template_size(sub) >= lhs_size:
                violations.append(
                    f"{rule.rule_id}: primed subterm is not smaller than the pattern"
                )
                continue
            for name, count in collect_metavars(sub).items():
                if count > lhs_counts.get(name, 0):
                    violations.append(
                        f"{rule.rule_id}: primed subterm repeats metavariable {name!r}"
                    )
                    break
    return violations


# --------------------------------------------------------------------------
# matching


def match_pattern(pattern, node, binding=None):
    """One-way structural match of a rule pattern against an AST node.
    Returns the substitution (metavar name -> bound fragment) or None."""
    if binding is None:
        binding = {}
    if _match(pattern, node, binding):
        return binding
    return None


def _bind(binding, name, value) -> bool:
    if name in binding:
        return _equal_fragment(binding[name], value)
    binding[name] = value
    return True


def _equal_fragment(a, b) -> bool:
    if isinstance(a, str) or isinstance(b, str):
        return a == b
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(x.key() == y.key() for x, y in zip(a, b))
    return a.key() == b.key()


def _match(pattern, node, binding) -> bool:
    if isinstance(pattern, MetaVar):
        kind = pattern.kind
        if kind == "v":
            return isinstance(node, lang.Var) and _bind(binding, pattern.name, node)
        if kind == "n":
            return isinstance(node, lang.IntLit) and _bind(binding, pattern.name, node)
        if kind in ("a", "b"):
            return isinstance(node, lang.Expr) and _bind(binding, pattern.name, node)
        return False

    if isinstance(pattern, FuncPattern):
        if not isinstance(node, lang.FuncDef):
            return False
        base = node.name.split("_")[0]
        if pattern.name not in (node.name, base):
            return False
        if len(pattern.params) != len(node.params):
            return False
        for p, name in zip(pattern.params, node.params):
            if not _bind(binding, p.name, lang.Var(name)):
                return False
        body_pat = pattern.body
        if len(body_pat) == 1 and isinstance(body_pat[0], MetaVar):
            return _bind(binding, body_pat[0].name, list(node.body))
        return False

    if type(pattern) is not type(node):
        return False

    if isinstance(pattern, lang.IntLit):
        return pattern.value == node.value
    if isinstance(pattern, lang.BoolLit):
        return pattern.value == node.value
    if isinstance(pattern, lang.Var):
        return pattern.name == node.name
    if isinstance(pattern, lang.ListLit):
        return len(pattern.elements) == len(node.elements) and all(
            _match(p, n, binding) for p, n in zip(pattern.elements, node.elements)
        )
    if isinstance(pattern, lang.Index):
        return _match(pattern.base, node.base, binding) and _match(
            pattern.index, node.index, binding
        )
    if isinstance(pattern, lang.Slice):
        for p, n in ((pattern.lo, node.lo), (pattern.hi, node.hi)):
            if (p is None) != (n is None):
                return False
        return (
            _match(pattern.base, node.base, binding)
            and (pattern.lo is None or _match(pattern.lo, node.lo, binding))
            and (pattern.hi is None or _match(pattern.hi, node.hi, binding))
        )
    if isinstance(pattern, (lang.BinOp, lang.Compare, lang.BoolOp)):
        if not _match_op(pattern.op, node.op, binding):
            return False
        return _match(pattern.left, node.left, binding) and _match(
            pattern.right, node.right, binding
        )
    if isinstance(pattern, lang.Not):
        return _match(pattern.operand, node.operand, binding)
    if isinstance(pattern, lang.Call):
        return (
            pattern.func == node.func
            and len(pattern.args) == len(node.args)
            and all(_match(p, n, binding) for p, n in zip(pattern.args, node.args))
        )
    if isinstance(pattern, lang.CondExpr):
        return (
            _match(pattern.body, node.body, binding)
            and _match(pattern.cond, node.cond, binding)
            and _match(pattern.orelse, node.orelse, binding)
        )
    if isinstance(pattern, lang.Assign):
        return _match(pattern.target, node.target, binding) and _match(
            pattern.value, node.value, binding
        )
    if isinstance(pattern, lang.AugAssign):
        if not _match_op(pattern.op, node.op, binding):
            return False
        return _match(pattern.target, node.target, binding) and _match(
            pattern.value, node.value, binding
        )
    if isinstance(pattern, lang.Return):
        return _match(pattern.value, node.value, binding)
    if isinstance(pattern, lang.MethodCall):
        if pattern.method != node.method or len(pattern.args) != len(node.args):
            return False
        if meta_kind(pattern.obj):
            if not _bind(binding, pattern.obj, lang.Var(node.obj)):
                return False
        elif pattern.obj != node.obj:
            return False
        return all(_match(p, n, binding) for p, n in zip(pattern.args, node.args))
    return False


def _match_op(pattern_op, node_op, binding) -> bool:
    if isinstance(pattern_op, MetaVar):
        return _bind(binding, pattern_op.name, node_op)
    return pattern_op == node_op


# --------------------------------------------------------------------------
# parsing


class RuleParser(Parser):
    """Expression/statement parser extended with template syntax."""

    def __init__(self, tokens, source):
        super().__init__(tokens, source)
        self.allow_template = False

    # names become metavariables when their stem is a known kind
    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "OP" and tok.value == "{" and self.allow_template:
            self.advance()
            options = [self.parse_expr()]
            while self.at("OP", ","):
                self.advance()
                options.append(self.parse_expr())
            self.expect("OP", "}")
            return ChoiceSet(options, self.span_from(tok.span))
        if tok.kind == "OP" and tok.value == "?" and self.allow_template:
            self.advance()
            name = self.expect("NAME").value
            if meta_kind(name) is None:
                raise self.error(f"?{name}: not a metavariable")
            return ScopeSet(name, self.span_from(tok.span))
        if tok.kind == "NAME" and meta_kind(tok.value) and not self._is_call():
            self.advance()
            return MetaVar(tok.value, meta_kind(tok.value), tok.span)
        return super().parse_atom()

    def _is_call(self) -> bool:
        nxt = self.peek(1)
        return nxt.kind == "OP" and nxt.value == "("

    def parse_postfix(self):
        start = self.peek().span
        node = self.parse_atom()
        while True:
            before = self.pos
            node = self.parse_trailers(node, start)
            if self.at("OP", "'"):
                tok = self.advance()
                if not self.allow_template:
                    raise SourceError(
                        "prime marks are only allowed in templates",
                        tok.span.line,
                        tok.span.col,
                    )
                node = Primed(node, node.span)
                continue
            if self.pos == before:
                return node

    def parse_comparison(self):
        start = self.peek().span
        left = self.parse_arith()
        tok = self.peek()
        if tok.kind == "OP" and tok.value in lang.COMPARE_OPS:
            op = self.advance().value
            right = self.parse_arith()
            return lang.Compare(left, op, right, self.span_from(start))
        if tok.kind == "OP" and tok.value == "~" and self.allow_template:
            self.advance()
            name = self.expect("NAME").value
            right = self.parse_arith()
            node = lang.Compare(left, "==", right, self.span_from(start))
            node.op = OpSet(name)
            return node
        if tok.kind == "NAME" and meta_kind(tok.value) == "cop":
            self.advance()
            right = self.parse_arith()
            node = lang.Compare(left, "==", right, self.span_from(start))
            node.op = MetaVar(tok.value, "cop", tok.span)
            return node
        return left

    def parse_arith(self):
        start = self.peek().span
        left = self.parse_term()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.value in ("+", "-"):
                op = self.advance().value
                left = lang.BinOp(left, op, self.parse_term(), self.span_from(start))
            elif tok.kind == "NAME" and meta_kind(tok.value) == "aop" and not self._ends_expr():
                self.advance()
                node = lang.BinOp(left, "+", self.parse_term(), self.span_from(start))
                node.op = MetaVar(tok.value, "aop", tok.span)
                left = node
            elif tok.kind == "OP" and tok.value == "~" and self.allow_template:
                save = self.pos
                self.advance()
                name_tok = self.peek()
                if name_tok.kind == "NAME" and meta_kind(name_tok.value) == "aop":
                    self.advance()
                    node = lang.BinOp(left, "+", self.parse_term(), self.span_from(start))
                    node.op = OpSet(name_tok.value)
                    left = node
                else:
                    self.pos = save
                    break
            else:
                break
        return left

    def _ends_expr(self) -> bool:
        nxt = self.peek(1)
        return nxt.kind in ("NEWLINE", "EOF") or (
            nxt.kind == "OP" and nxt.value in (")", "]", "}", ",")
        )

    # -- statement-level fragments ------------------------------------------

    def parse_fragment(self, template: bool):
        """Parse one rule side: a function pattern, a statement or an
        expression (decided by lookahead)."""
        self.allow_template = template
        tok = self.peek()
        if tok.kind == "KEYWORD" and tok.value == "def":
            return self.parse_func_fragment(), "func"
        if tok.kind == "KEYWORD" and tok.value == "return":
            self.advance()
            value = self.parse_expr()
            return lang.Return(value, self.span_from(tok.span)), "stmt"
        if tok.kind == "KEYWORD" and tok.value == "pass":
            self.advance()
            return lang.Pass(tok.span), "stmt"
        if tok.kind == "OP" and tok.value == "{" and template:
            # statement choice is only recognized when options are statements
            save = self.pos
            try:
                return self.parse_stmt_choice(), "stmt"
            except SourceError:
                self.pos = save
        expr = self.parse_expr()
        tok = self.peek()
        if tok.kind == "OP" and tok.value == "=":
            self.advance()
            value = self.parse_expr()
            if not isinstance(expr, (lang.Var, lang.Index, MetaVar)):
                raise self.error("assignment target must be a variable or index")
            return lang.Assign(expr, value, self.span_from(expr.span)), "stmt"
        if tok.kind == "OP" and tok.value in lang.AUG_OPS:
            op = self.advance().value
            value = self.parse_expr()
            return (
                lang.AugAssign(expr, op[0], value, self.span_from(expr.span)),
                "stmt",
            )
        return expr, "expr"

    def parse_stmt_choice(self):
        start = self.expect("OP", "{").span
        options = [self.parse_inline_stmt()]
        while self.at("OP", ","):
            self.advance()
            options.append(self.parse_inline_stmt())
        self.expect("OP", "}")
        return StmtChoice(options, self.span_from(start))

    def parse_func_fragment(self):
        start = self.expect("KEYWORD", "def").span
        name = self.expect("NAME").value
        self.expect("OP", "(")
        params = []
        if not self.at("OP", ")"):
            params.append(self._param())
            while self.at("OP", ","):
                self.advance()
                params.append(self._param())
        self.expect("OP", ")")
        self.expect("OP", ":")
        if self.at("OP", "{") and self.allow_template:
            self.advance()
            body = self.parse_stmt_seq()
            self.expect("OP", "}")
        else:
            body = self.parse_stmt_seq()
        return FuncPattern(name, params, body, self.span_from(start))

    def _param(self):
        tok = self.expect("NAME")
        kind = meta_kind(tok.value)
        if kind is None:
            raise self.error(f"parameter {tok.value!r} must be a metavariable")
        return MetaVar(tok.value, kind, tok.span)

    def parse_stmt_seq(self) -> list:
        stmts = [self.parse_inline_stmt()]
        while self.at("OP", ";"):
            self.advance()
            stmts.append(self.parse_inline_stmt())
        return stmts

    def parse_inline_stmt(self):
        tok = self.peek()
        if tok.kind == "NAME" and meta_kind(tok.value) == "s":
            self.advance()
            return MetaVar(tok.value, "s", tok.span)
        if tok.kind == "KEYWORD" and tok.value == "return":
            self.advance()
            return lang.Return(self.parse_expr(), self.span_from(tok.span))
        if tok.kind == "KEYWORD" and tok.value == "pass":
            self.advance()
            return lang.Pass(tok.span)
        if tok.kind == "KEYWORD" and tok.value in ("if", "while"):
            self.advance()
            cond = self.parse_expr()
            self.expect("OP", ":")
            self.expect("OP", "{")
            body = self.parse_stmt_seq()
            self.expect("OP", "}")
            if tok.value == "while":
                return lang.While(cond, body, self.span_from(tok.span))
            else_body = []
            if self.at("KEYWORD", "else"):
                self.advance()
                self.expect("OP", ":")
                self.expect("OP", "{")
                else_body = self.parse_stmt_seq()
                self.expect("OP", "}")
            return lang.If(cond, body, else_body, self.span_from(tok.span))
        expr = self.parse_expr()
        if self.at("OP", "="):
            self.advance()
            return lang.Assign(expr, self.parse_expr(), self.span_from(expr.span))
        if self.peek().kind == "OP" and self.peek().value in lang.AUG_OPS:
            op = self.advance().value
            return lang.AugAssign(expr, op[0], self.parse_expr(), self.span_from(expr.span))
        raise self.error("expected a statement")


def parse_eml(source: str) -> ErrorModel:
    """Parse rule text into an ErrorModel.  Raises SourceError on malformed
    input and DuplicateRuleId on repeated rule names."""
    parser = RuleParser(tokenize(source, rule_mode=True), source)
    rules = []
    seen = set()
    while not parser.at("EOF"):
        if parser.at("NEWLINE"):
            parser.advance()
            continue
        tok = parser.expect("NAME")
        if tok.value != "rule":
            raise SourceError("expected 'rule'", tok.span.line, tok.span.col)
        rule_id = parser.expect("NAME").value
        if rule_id in seen:
            raise DuplicateRuleId(rule_id)
        seen.add(rule_id)
        weight = 1
        if parser.at("NAME", "weight"):
            parser.advance()
            weight = int(parser.expect("INT").value)
            if weight < 1:
                raise SourceError("weight must be >= 1", tok.span.line, tok.span.col)
        parser.expect("OP", ":")
        lhs, lhs_kind = parser.parse_fragment(template=False)
        parser.expect("OP", "->")
        rhs, rhs_kind = parser.parse_fragment(template=True)
        message = None
        if parser.at("NAME", "msg"):
            parser.advance()
            message = parser.expect("STRING").value
        if not parser.at("EOF"):
            parser.expect("NEWLINE")
        rule = CorrectionRule(rule_id, lhs, rhs, weight, message, lhs_kind)
        _validate_rule(rule, rhs_kind)
        rules.append(rule)
    return ErrorModel(rules)


def _validate_rule(rule: CorrectionRule, rhs_kind: str) -> None:
    lhs_vars = set(rule.lhs_metavars())
    for name in collect_metavars(rule.rhs):
        if name not in lhs_vars:
            raise SourceError(
                f"unbound metavariable {name!r} in rule {rule.rule_id}", 0, 0
            )
    for sub in _template_only(rule.lhs):
        raise SourceError(
            f"rule {rule.rule_id}: template syntax on the left side", 0, 0
        )
    if rule.lhs_kind == "func" and rhs_kind != "func":
        raise SourceError(
            f"rule {rule.rule_id}: function pattern needs a function template", 0, 0
        )


def _template_only(node):
    if isinstance(node, (ChoiceSet, ScopeSet, OpSet, Primed, StmtChoice)):
        yield node
        return
    for child in _children(node):
        yield from _template_only(child)
