import itertools

import pytest
from hypothesis import given, settings

from contingent.semantics import Model, evaluate, is_valid_in_frame
from contingent.syntax import (
    And, Atom, Bot, Box, Delta, FormulaSyntaxError, Iff, Imp, Meta, Not, Or, Top, UnboundMetavariable,
    atoms, depth, instantiate, is_tautology_instance, metavariables, parse, print_formula,
)
from contingent.proof import SCHEMAS

from conftest import formulas

p, q, r = Atom("p"), Atom("q"), Atom("r")


def test_parse_examples():
    assert parse("D(p & q) -> Dp") == Imp(Delta(And(p, q)), Delta(p))
    assert parse("Dp <-> D~p") == Iff(Delta(p), Delta(Not(p)))
    assert parse("DT") == Delta(Top())
    assert parse("Bp | B~p") == Or(Box(p), Box(Not(p)))


def test_unbalanced_paren_column():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse("D(p")
    assert exc.value.column == 4


@pytest.mark.parametrize("text, column", [
    ("p &", 4), ("p q", 3), (")", 1), ("p <-> q <-> r", 9), ("X", 1), ("", 1), ("p -> ", 6),
])
def test_syntax_error_columns(text, column):
    with pytest.raises(FormulaSyntaxError) as exc:
        parse(text)
    assert exc.value.column == column


def test_precedence_and_associativity():
    assert parse("p -> q -> r") == Imp(p, Imp(q, r))
    assert parse("p & q & r") == And(And(p, q), r)
    assert parse("p | q | r") == Or(Or(p, q), r)
    assert parse("p | q & r") == Or(p, And(q, r))
    assert parse("p & q -> r <-> q") == Iff(Imp(And(p, q), r), q)
    assert parse("~Dp") == Not(Delta(p))
    assert parse("D~p & q") == And(Delta(Not(p)), q)


def test_unicode_aliases():
    assert parse("Δφ ↔ Δ¬φ") == SCHEMAS["dEqu"].pattern
    assert parse("□(p ∧ q) → □p ∧ □q") == parse("B(p & q) -> Bp & Bq")
    assert parse("⊤ ∨ ⊥") == Or(Top(), Bot())


def test_metavariables_are_not_atoms():
    assert parse("phi") == Meta("phi")
    with pytest.raises(ValueError):
        Atom("phi")
    with pytest.raises(ValueError):
        Atom("P")


def test_print_examples():
    assert print_formula(Delta(Top())) == "DT"
    assert print_formula(p) == "p"
    assert print_formula(Or(Box(p), Box(Not(p)))) == "Bp | B~p"
    assert print_formula(Imp(Imp(p, q), r)) == "(p -> q) -> r"
    assert print_formula(And(p, And(q, r))) == "p & (q & r)"


@settings(max_examples=500)
@given(formulas(max_leaves=20))
def test_round_trip(f):
    assert parse(print_formula(f)) == f


def test_depth():
    assert depth(p) == 0
    assert depth(parse("D(p & Bq) | Dr")) == 2


def test_instantiate_examples():
    eq = instantiate(SCHEMAS["dEqu"].pattern, {"phi": And(p, q)})
    assert eq == parse("D(p&q) <-> D~(p&q)")
    c = instantiate(SCHEMAS["dC"].pattern, {"phi": p, "psi": q})
    assert c == parse("(Dp & Dq) -> D(p&q)")
    with pytest.raises(UnboundMetavariable) as exc:
        instantiate(SCHEMAS["dM"].pattern, {"phi": p})
    assert exc.value.name in ("psi", "chi")


@given(formulas(), formulas(), formulas())
def test_instantiate_leaves_no_metavariables(a, b, c):
    for schema in SCHEMAS.values():
        g = instantiate(schema.pattern, {"phi": a, "psi": b, "chi": c})
        assert metavariables(g) == []


# --- tautology instances, checked against a plain truth-table oracle -----------


def _oracle_letters(f, out):
    if isinstance(f, (Atom, Meta, Delta, Box)):
        if f not in out:
            out.append(f)
    elif isinstance(f, Not):
        _oracle_letters(f.sub, out)
    elif isinstance(f, (And, Or, Imp, Iff)):
        _oracle_letters(f.left, out)
        _oracle_letters(f.right, out)
    return out


def _oracle_value(f, row):
    if f in row:
        return row[f]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Not):
        return not _oracle_value(f.sub, row)
    a, b = _oracle_value(f.left, row), _oracle_value(f.right, row)
    return {And: a and b, Or: a or b, Imp: (not a) or b, Iff: a == b}[type(f)]


def oracle_tautology(f):
    letters = _oracle_letters(f, [])
    return all(_oracle_value(f, dict(zip(letters, vals)))
               for vals in itertools.product((False, True), repeat=len(letters)))


@pytest.mark.parametrize("text, expected", [
    ("Dp -> Dp", True),
    ("((p->q)&(~p->q)) <-> q", True),
    ("Dp -> D~p", False),
    ("D(p & q) -> D(p & q) | r", True),
    ("D(p & q) -> D(q & p)", False),
    ("T", True),
    ("F -> p", True),
    ("p | ~p", True),
    ("p", False),
])
def test_tautology_examples(text, expected):
    f = parse(text)
    assert oracle_tautology(f) == expected
    assert is_tautology_instance(f) == expected


@settings(max_examples=400)
@given(formulas(max_leaves=10))
def test_tautology_matches_oracle(f):
    assert is_tautology_instance(f) == oracle_tautology(f)


@settings(max_examples=60, deadline=None)
@given(f=formulas(atoms=("p", "q"), max_leaves=8))
def test_tautology_instances_are_valid_on_small_frames(f, small_frames):
    if is_tautology_instance(f):
        assert all(is_valid_in_frame(fr, f) for fr in small_frames)
