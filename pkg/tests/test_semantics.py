import random

import pytest
from hypothesis import given, settings, strategies as st

from contingent import fixtures
from contingent.search import DEFINING_FORMULAS, random_frame, random_model
from contingent.semantics import (
    BoundExceeded, Exhaustive, Frame, Model, PropertySet, Sample, UnknownState, check_property, evaluate,
    falsifying_valuation, frame_label, is_valid_in_frame, is_valid_on_class, truth_set,
)
from contingent.syntax import And, Atom, Bot, Box, Delta, Iff, Imp, Not, Or, Top, instantiate, parse
from contingent.proof import SCHEMAS

from conftest import all_valuations, formulas


def names(model, f):
    return set(model.frame.names(truth_set(model, parse(f))))


def test_item_v_truth_sets():
    m = fixtures.model("item_v")
    assert names(m, "Dp") == {"s"}
    assert not evaluate(m, "s", parse("D(p&~p)"))
    assert names(m, "T") == {"s", "t"}


def test_item_vii_and_vi_evaluation():
    m = fixtures.model("item_vii")
    assert evaluate(m, "s", parse("Dp"))
    assert not evaluate(m, "s", parse("D(p|q)"))
    m = fixtures.model("item_vi")
    assert evaluate(m, "s", parse("Dp"))
    assert evaluate(m, "s", parse("Dq"))
    assert not evaluate(m, "s", parse("D(p&q)"))


def test_unknown_state():
    with pytest.raises(UnknownState):
        evaluate(fixtures.model("item_v"), "w", parse("p"))


def test_missing_atoms_denote_empty():
    m = fixtures.model("item_v")
    assert truth_set(m, parse("r")) == 0
    assert names(m, "~r") == {"s", "t"}


def test_box_and_delta_clauses():
    frame = Frame.from_sets("st", {"s": [["t"]], "t": [[]]})
    m = Model.from_sets(frame, {"p": ["s"]})
    assert names(m, "Bp") == set()
    assert names(m, "B~p") == {"s"}
    assert names(m, "Dp") == {"s"}
    assert names(m, "BF") == {"t"}
    assert names(m, "DT") == {"t"}


def test_check_property_examples():
    assert check_property(fixtures.model("item_v").frame, PropertySet.parse("c"))
    assert check_property(fixtures.model("item_vii").frame, PropertySet.parse("mcn"))
    assert not check_property(fixtures.model("item_vii").frame, PropertySet.parse("z"))
    power = Frame(tuple("stu"), (frozenset(range(8)),) * 3)
    assert check_property(power, PropertySet.parse("mcnz"))
    assert frame_label(power) == "filter"


def test_property_definitions_directly():
    # (m) fails: {s} present, {s,t} missing
    f = Frame.from_sets("st", {"s": [["s"]], "t": []})
    assert not check_property(f, PropertySet.parse("m"))
    assert check_property(f, PropertySet.parse("c"))
    assert not check_property(f, PropertySet.parse("n"))
    assert not check_property(f, PropertySet.parse("z"))
    # (c) fails: {s},{t} present, ∅ missing
    g = Frame.from_sets("st", {"s": [["s"], ["t"]], "t": []})
    assert not check_property(g, PropertySet.parse("c"))
    assert check_property(g, PropertySet.parse("z"))
    assert check_property(g, PropertySet())


def test_property_set_parse():
    assert PropertySet.parse("mc") == PropertySet(m=True, c=True)
    assert str(PropertySet.parse("mcnz")) in ("(mcnz)", "(all)")
    assert PropertySet.parse("m") <= PropertySet.parse("mc")
    with pytest.raises(ValueError):
        PropertySet.parse("q")


def test_valid_in_frame_examples():
    n_frame = Frame(("s",), (frozenset({1}),))
    assert is_valid_in_frame(n_frame, parse("DT"))
    v = fixtures.model("item_v").frame
    assert not is_valid_in_frame(v, parse("(Dp & D~p) -> D(p&~p)"))
    assert is_valid_in_frame(Frame(("s",), (frozenset(),)), parse("p -> p"))
    with pytest.raises(ValueError):
        is_valid_in_frame(v, SCHEMAS["dC"].pattern)


def test_falsifying_valuation_re_verifies():
    v = fixtures.model("item_v").frame
    model, state = falsifying_valuation(v, parse("Dp & Dq -> D(p & q)"))
    assert not evaluate(model, state, parse("Dp & Dq -> D(p & q)"))
    assert falsifying_valuation(v, parse("Dp -> Dp")) is None


def oracle_valid(frame, f):
    from contingent.syntax import atoms
    names_ = sorted(atoms(f))
    full = frame.full
    for val in all_valuations(frame.size, names_):
        if truth_set(Model(frame, val), f) != full:
            return False
    return True


@settings(max_examples=150, deadline=None)
@given(f=formulas(atoms=("p", "q"), max_leaves=8), seed=st.integers(0, 10**6), n=st.integers(1, 3))
def test_vectorized_validity_matches_brute_force(f, seed, n):
    frame = random_frame(n, random.Random(seed))
    assert is_valid_in_frame(frame, f) == oracle_valid(frame, f)


@settings(max_examples=200, deadline=None)
@given(f=formulas(modal=(), max_leaves=16), seed=st.integers(0, 10**6), n=st.integers(1, 5))
def test_boolean_clauses_match_truth_tables(f, seed, n):
    model = random_model(n, random.Random(seed))

    def classical(g, i):
        if isinstance(g, Atom):
            return bool(model.valuation.get(g.name, 0) >> i & 1)
        if isinstance(g, Top):
            return True
        if isinstance(g, Bot):
            return False
        if isinstance(g, Not):
            return not classical(g.sub, i)
        a, b = classical(g.left, i), classical(g.right, i)
        return {And: a and b, Or: a or b, Imp: (not a) or b, Iff: a == b}[type(g)]

    for i in range(n):
        assert evaluate(model, i, f) == classical(f, i)


@settings(max_examples=150, deadline=None)
@given(f=formulas(max_leaves=10), seed=st.integers(0, 10**6), n=st.integers(1, 4), extra=st.integers(0, 15))
def test_locality(f, seed, n, extra):
    """Atoms outside the formula never affect its truth set."""
    model = random_model(n, random.Random(seed))
    val = dict(model.valuation)
    val["zz"] = extra & model.frame.full
    assert truth_set(Model(model.frame, val), f) == truth_set(model, f)


@settings(max_examples=150, deadline=None)
@given(f=formulas(max_leaves=10), seed=st.integers(0, 10**6), n=st.integers(1, 4))
def test_box_equals_delta_on_z_frames(f, seed, n):
    rng = random.Random(seed)
    model = random_model(n, rng)
    frame = random_frame(n, rng, PropertySet.parse("z"))
    m = model.with_frame(frame)
    assert truth_set(m, Box(f)) == truth_set(m, Delta(f))


@pytest.mark.parametrize("flag", "mcnz")
def test_correspondence_exhaustive_small(flag, small_frames):
    props = PropertySet.parse(flag)
    formula = DEFINING_FORMULAS[flag]
    for frame in small_frames:
        assert check_property(frame, props) == is_valid_in_frame(frame, formula)


def test_sdm_equivalent_to_reverse_monotony(small_frames):
    a, b = parse("Dp -> D(p|q)"), parse("D(p&q) -> Dp")
    for frame in small_frames:
        assert is_valid_in_frame(frame, a) == is_valid_in_frame(frame, b)


def test_dm_equivalent_to_dm_prime(small_frames):
    a, b = SCHEMAS["dM"].instance(), SCHEMAS["dM'"].instance()
    for frame in small_frames:
        assert is_valid_in_frame(frame, a) == is_valid_in_frame(frame, b)


def test_is_valid_on_class_examples():
    dm = SCHEMAS["dM"].instance()
    r = is_valid_on_class(PropertySet.parse("m"), dm, 2, Exhaustive())
    assert r.valid_up_to_bound and r.label == "valid_up_to_bound"
    assert "bounded" in str(r)
    r = is_valid_on_class(PropertySet.parse("c"), parse("Dp & D~p -> D(p & ~p)"), 2, Exhaustive())
    assert not r.valid_up_to_bound
    assert r.countermodel.frame.size <= 2
    assert not evaluate(r.countermodel, r.state, parse("Dp & D~p -> D(p & ~p)"))
    r = is_valid_on_class(PropertySet.parse("mz"), parse("Dp -> D(p|q)"), 2, Exhaustive())
    assert r.valid_up_to_bound


def test_is_valid_on_class_bounds():
    with pytest.raises(BoundExceeded):
        is_valid_on_class(PropertySet(), parse("Dp"), 4, Exhaustive())
    with pytest.raises(ValueError):
        is_valid_on_class(PropertySet(), parse("Dp"), 0)


def test_sampled_class_check_is_deterministic():
    f = parse("Dp & Dq -> D(p & q)")
    a = is_valid_on_class(PropertySet.parse("c"), f, 3, Sample(200, 7), min_size=3)
    b = is_valid_on_class(PropertySet.parse("c"), f, 3, Sample(200, 7), min_size=3)
    assert a.valid_up_to_bound == b.valid_up_to_bound
    assert a.frames_examined == b.frames_examined
    if a.countermodel:
        assert a.countermodel.frame == b.countermodel.frame and a.state == b.state
