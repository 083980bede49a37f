import pytest
from hypothesis import given, strategies as st

from ringforge.pddl.sexpr import PDDLSyntaxError, read, tokenize


def test_read_nested_lowercases_atoms():
    expr = read("(Define (Domain X) (:predicates (P ?A)))")
    assert expr == ["define", ["domain", "x"], [":predicates", ["p", "?a"]]]


def test_comments_are_skipped():
    assert read("(a ; ignore (this)\n b)") == ["a", "b"]


@pytest.mark.parametrize("text, line, column", [
    ("(a b", 1, 1),
    ("(a)\n)", 2, 1),
    ("(a) (b)", 1, 5),
    ("", 1, 1),
])
def test_syntax_errors_carry_positions(text, line, column):
    with pytest.raises(PDDLSyntaxError) as info:
        read(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_token_positions():
    toks = list(tokenize("(a\n  bc)"))
    assert [(t.text, t.line, t.column) for t in toks] == [
        ("(", 1, 1), ("a", 1, 2), ("bc", 2, 3), (")", 2, 5)]


names = st.from_regex(r"[a-z][a-z0-9\-]{0,6}", fullmatch=True)
trees = st.recursive(names, lambda kids: st.lists(kids, max_size=4), max_leaves=20)


def _show(t):
    return t if isinstance(t, str) else "(" + " ".join(_show(x) for x in t) + ")"


@given(st.lists(trees, max_size=4))
def test_read_inverts_printing(items):
    assert read(_show(items)) == items
