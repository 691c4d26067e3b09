"""Pretty-printer for the mini language.

This is the normative formatter: ``parse(pretty(p))`` is structurally equal
to ``p``, and pretty-printing is idempotent on parser output.  Parentheses
are emitted only where precedence requires them.
"""

from __future__ import annotations

from . import lang

# precedence levels, loosest binding first
_PREC_COND = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_NOT = 4
_PREC_CMP = 5
_PREC_ADD = 6
_PREC_MUL = 7
_PREC_POW = 8
_PREC_ATOM = 9

_BINOP_PREC = {"+": _PREC_ADD, "-": _PREC_ADD, "*": _PREC_MUL, "/": _PREC_MUL, "**": _PREC_POW}


def pretty_expr(node: lang.Expr) -> str:
    return _expr(node, 0)


def _expr(node, parent_prec: int) -> str:
    if isinstance(node, lang.IntLit):
        return str(node.value)
    if isinstance(node, lang.BoolLit):
        return "True" if node.value else "False"
    if isinstance(node, lang.Var):
        return node.name
    if isinstance(node, lang.ListLit):
        return "[" + ", ".join(_expr(e, 0) for e in node.elements) + "]"
    if isinstance(node, lang.Index):
        return f"{_expr(node.base, _PREC_ATOM)}[{_expr(node.index, 0)}]"
    if isinstance(node, lang.Slice):
        lo = _expr(node.lo, 0) if node.lo else ""
        hi = _expr(node.hi, 0) if node.hi else ""
        return f"{_expr(node.base, _PREC_ATOM)}[{lo}:{hi}]"
    if isinstance(node, lang.Call):
        return f"{node.func}(" + ", ".join(_expr(a, 0) for a in node.args) + ")"
    if isinstance(node, lang.BinOp):
        prec = _BINOP_PREC[node.op]
        if node.op == "**":  # right associative
            text = f"{_expr(node.left, prec + 1)} ** {_expr(node.right, prec)}"
        else:
            text = f"{_expr(node.left, prec)} {node.op} {_expr(node.right, prec + 1)}"
        return _paren(text, prec, parent_prec)
    if isinstance(node, lang.Compare):
        text = f"{_expr(node.left, _PREC_CMP + 1)} {node.op} {_expr(node.right, _PREC_CMP + 1)}"
        return _paren(text, _PREC_CMP, parent_prec)
    if isinstance(node, lang.BoolOp):
        prec = _PREC_OR if node.op == "or" else _PREC_AND
        text = f"{_expr(node.left, prec)} {node.op} {_expr(node.right, prec + 1)}"
        return _paren(text, prec, parent_prec)
    if isinstance(node, lang.Not):
        text = f"not {_expr(node.operand, _PREC_NOT)}"
        return _paren(text, _PREC_NOT, parent_prec)
    if isinstance(node, lang.CondExpr):
        text = (
            f"{_expr(node.body, _PREC_COND + 1)} if {_expr(node.cond, _PREC_COND + 1)}"
            f" else {_expr(node.orelse, _PREC_COND)}"
        )
        return _paren(text, _PREC_COND, parent_prec)
    raise TypeError(f"not an expression: {node!r}")


def _paren(text: str, prec: int, parent_prec: int) -> str:
    return f"({text})" if prec < parent_prec else text


def pretty_stmt(stmt: lang.Stmt, indent: int = 0) -> list:
    pad = "    " * indent
    if isinstance(stmt, lang.Assign):
        return [f"{pad}{_expr(stmt.target, 0)} = {_expr(stmt.value, 0)}"]
    if isinstance(stmt, lang.AugAssign):
        return [f"{pad}{_expr(stmt.target, 0)} {stmt.op}= {_expr(stmt.value, 0)}"]
    if isinstance(stmt, lang.MethodCall):
        args = ", ".join(_expr(a, 0) for a in stmt.args)
        return [f"{pad}{stmt.obj}.{stmt.method}({args})"]
    if isinstance(stmt, lang.Return):
        return [f"{pad}return {_expr(stmt.value, 0)}"]
    if isinstance(stmt, lang.Pass):
        return [f"{pad}pass"]
    if isinstance(stmt, lang.If):
        lines = [f"{pad}if {_expr(stmt.cond, 0)}:"]
        for s in stmt.then_body:
            lines.extend(pretty_stmt(s, indent + 1))
        if stmt.else_body:
            lines.append(f"{pad}else:")
            for s in stmt.else_body:
                lines.extend(pretty_stmt(s, indent + 1))
        return lines
    if isinstance(stmt, lang.While):
        lines = [f"{pad}while {_expr(stmt.cond, 0)}:"]
        for s in stmt.body:
            lines.extend(pretty_stmt(s, indent + 1))
        return lines
    if isinstance(stmt, lang.ForIn):
        lines = [f"{pad}for {stmt.var} in {_expr(stmt.iterable, 0)}:"]
        for s in stmt.body:
            lines.extend(pretty_stmt(s, indent + 1))
        return lines
    raise TypeError(f"not a statement: {stmt!r}")


def pretty_func(func: lang.FuncDef) -> str:
    lines = [f"def {func.name}({', '.join(func.params)}):"]
    for s in func.body:
        lines.extend(pretty_stmt(s, 1))
    return "\n".join(lines)


def pretty_program(program: lang.Program) -> str:
    """Render a program in normal form: one trailing newline, LF endings."""
    return "\n\n".join(pretty_func(f) for f in program.functions) + "\n"
