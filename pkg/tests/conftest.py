import itertools

import pytest
from hypothesis import strategies as st

from contingent.semantics import Frame, Model
from contingent.syntax import And, Atom, Bot, Box, Delta, Iff, Imp, Not, Or, Top

ATOMS = ("p", "q", "r")


def formulas(atoms=ATOMS, modal=(Delta, Box), max_leaves=12):
    leaves = st.sampled_from([Atom(a) for a in atoms] + [Top(), Bot()])

    def extend(children):
        unary = st.sampled_from((Not,) + tuple(modal)).flatmap(lambda op: children.map(op))
        binary = st.sampled_from((And, Or, Imp, Iff)).flatmap(
            lambda op: st.tuples(children, children).map(lambda lr: op(*lr)))
        return unary | binary

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def all_frames(n):
    """Brute-force listing of every frame on n states, independent of the enumerator."""
    subsets = range(1 << n)
    collections = [frozenset(c) for k in range(len(subsets) + 1)
                   for c in itertools.combinations(subsets, k)]
    for colls in itertools.product(collections, repeat=n):
        yield Frame(tuple("stuvw"[:n]), colls)


def all_valuations(n, names):
    for masks in itertools.product(range(1 << n), repeat=len(names)):
        yield dict(zip(names, masks))


@pytest.fixture(scope="session")
def small_frames():
    return [f for n in (1, 2) for f in all_frames(n)]
