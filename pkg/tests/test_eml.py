import pytest

from autofix import lang
from autofix.eml import (
    ChoiceSet,
    DuplicateRuleId,
    ErrorModel,
    MetaVar,
    Primed,
    ScopeSet,
    check_well_formed,
    collect_metavars,
    match_pattern,
    parse_eml,
)
from autofix.lexer import SourceError
from autofix.parser import Parser, tokenize


def expr(text):
    return Parser(tokenize(text + "\n"), text).parse_expr()


def test_parse_five_rule_model(deriv_model):
    assert [r.rule_id for r in deriv_model] == ["IndF", "InitF", "RanR", "CondF", "RetF"]
    assert all(r.weight == 1 for r in deriv_model)
    assert all(r.message for r in deriv_model)


def test_rule_order_preserved_and_weights_parse():
    model = parse_eml(
        'rule A weight 3: v = n -> v = {n + 1}\n'
        'rule B: return a -> return [0]\n'
    )
    assert [r.rule_id for r in model] == ["A", "B"]
    assert model.rules[0].weight == 3
    assert model.rules[1].weight == 1


def test_empty_file_gives_empty_model():
    assert parse_eml("") == ErrorModel([])
    assert parse_eml("# only a comment\n") == ErrorModel([])


def test_unbound_metavariable_rejected():
    with pytest.raises(SourceError) as err:
        parse_eml("rule X: v[a] -> v[a0]\n")
    assert "unbound metavariable" in str(err.value)


def test_duplicate_rule_id_rejected():
    with pytest.raises(DuplicateRuleId):
        parse_eml("rule X: v = n -> v = 0\nrule X: return a -> return [0]\n")


def test_template_syntax_not_allowed_in_pattern():
    with pytest.raises(SourceError):
        parse_eml("rule X: v[{a}] -> v[a]\n")


# -- well-formedness ---------------------------------------------------------


def test_primed_whole_pattern_is_ill_formed():
    model = parse_eml("rule Bad: v[a] -> {(v[a])' + 1}\n")
    violations = check_well_formed(model)
    assert violations and "Bad" in violations[0]


def test_primed_parts_are_well_formed():
    model = parse_eml("rule Good: v[a] -> {v'[a'] + 1}\n")
    assert check_well_formed(model) == []


def test_empty_model_is_well_formed():
    assert check_well_formed(ErrorModel([])) == []


def test_duplicating_primed_metavariable_is_ill_formed():
    # pattern-size alone would admit this; the occurrence check rejects it
    model = parse_eml("rule Dup: v[a + a0] -> {(v[v'])'}\n")
    assert check_well_formed(model)


# -- matching ---------------------------------------------------------------


def pattern(text, kind="expr"):
    model = parse_eml(f"rule T: {text} -> 0\n" if kind == "expr" else f"rule T: {text} -> pass\n")
    return model.rules[0].lhs


def test_match_comparison():
    pat = pattern("a0 cop a1")
    node = expr("poly[expo] == 0")
    binding = match_pattern(pat, node)
    assert binding is not None
    assert binding["a0"].key() == expr("poly[expo]").key()
    assert binding["cop"] == "=="
    assert binding["a1"].key() == lang.IntLit(0).key()


def test_match_shape_mismatch():
    assert match_pattern(pattern("v[a]"), expr("x + 1")) is None


def test_match_assignment():
    model = parse_eml("rule T: v = n -> v = 0\n")
    stmt = Parser(tokenize("zero = 0\n"), "").parse_stmt()
    binding = match_pattern(model.rules[0].lhs, stmt)
    assert binding["v"].key() == lang.Var("zero").key()
    assert binding["n"].key() == lang.IntLit(0).key()


def test_var_metavar_only_binds_variables():
    assert match_pattern(pattern("v[a]"), expr("f(x)[1]")) is None
    assert match_pattern(pattern("v[a]"), expr("x[1]")) is not None


def test_nonlinear_pattern_requires_equal_fragments():
    pat = pattern("a0 + a0")
    assert match_pattern(pat, expr("x * 2 + x * 2")) is not None
    assert match_pattern(pat, expr("x + y")) is None


def test_call_pattern_matches_name_and_arity():
    pat = pattern("range(a0, a1)")
    assert match_pattern(pat, expr("range(0, len(xs))")) is not None
    assert match_pattern(pat, expr("range(10)")) is None
    assert match_pattern(pat, expr("len(xs)")) is None


def apply_binding(pat, binding):
    """Independent oracle: substitute a binding back into a pattern."""
    if isinstance(pat, MetaVar):
        return binding[pat.name]
    if isinstance(pat, lang.Index):
        return lang.Index(apply_binding(pat.base, binding), apply_binding(pat.index, binding))
    if isinstance(pat, lang.BinOp):
        op = binding[pat.op.name] if isinstance(pat.op, MetaVar) else pat.op
        return lang.BinOp(apply_binding(pat.left, binding), op, apply_binding(pat.right, binding))
    if isinstance(pat, lang.Compare):
        op = binding[pat.op.name] if isinstance(pat.op, MetaVar) else pat.op
        return lang.Compare(apply_binding(pat.left, binding), op, apply_binding(pat.right, binding))
    if isinstance(pat, lang.Call):
        return lang.Call(pat.func, [apply_binding(a, binding) for a in pat.args])
    if isinstance(pat, (lang.IntLit, lang.BoolLit, lang.Var)):
        return pat
    raise TypeError(pat)


@pytest.mark.parametrize(
    "pat_text,node_text",
    [
        ("a0 cop a1", "x[i] < y[j]"),
        ("v[a]", "xs[i + 1]"),
        ("a0 + a1", "1 + f(x)"),
        ("range(a0, a1)", "range(0, n)"),
    ],
)
def test_match_soundness(pat_text, node_text):
    pat = pattern(pat_text)
    node = expr(node_text)
    binding = match_pattern(pat, node)
    assert binding is not None
    assert apply_binding(pat, binding).key() == node.key()


def test_collect_metavars_counts_occurrences():
    model = parse_eml("rule T: v[a] -> v[{a + 1, a - 1, ?a}]\n")
    assert collect_metavars(model.rules[0].lhs) == {"v": 1, "a": 1}
    rhs_counts = collect_metavars(model.rules[0].rhs)
    assert rhs_counts["a"] >= 2


def test_template_forms_parse(deriv_model):
    condf = deriv_model.rules[3]
    assert isinstance(condf.rhs, ChoiceSet)
    compform = condf.rhs.options[0]
    assert isinstance(compform, lang.Compare)
    assert isinstance(compform.left, ChoiceSet)
    assert isinstance(compform.left.options[0].left, Primed)
    assert isinstance(compform.left.options[1], ScopeSet)
