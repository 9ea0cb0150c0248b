"""Frame and model transforms.

Every transform acts on the neighborhood function only; applied to a
:class:`Model` it keeps the valuation untouched.
"""

from __future__ import annotations

from functools import lru_cache
from typing import TypeVar

from .semantics import BoundExceeded, Frame, Model, PropertySet
from .syntax import (
    And, Atom, Bot, Box, Delta, Formula, Iff, Imp, Meta, Not, Or, Top,
)

MAX_CLOSURE_STATES = 5

F = TypeVar("F", Frame, Model)


def _lift(obj, fn):
    if isinstance(obj, Model):
        return obj.with_frame(_lift(obj.frame, fn))
    full = obj.full
    return Frame(obj.states, tuple(fn(coll, full) for coll in obj.neighborhoods))


def superset_closure(coll: frozenset[int], full: int) -> frozenset[int]:
    out = set()
    for x in coll:
        if x in out:
            continue
        rest = full & ~x
        # enumerate all subsets of the complement
        sub = rest
        while True:
            out.add(x | sub)
            if sub == 0:
                break
            sub = (sub - 1) & rest
    return frozenset(out)


def complement_closure(coll: frozenset[int], full: int) -> frozenset[int]:
    return frozenset(coll | {full ^ x for x in coll})


def intersection_closure(coll: frozenset[int], full: int) -> frozenset[int]:
    out = set(coll)
    frontier = list(out)
    while frontier:
        new = []
        for x in frontier:
            for y in list(out):
                z = x & y
                if z not in out:
                    out.add(z)
                    new.append(z)
        frontier = new
    return frozenset(out)


def supplementation(obj: F) -> F:
    """N⁺(s) = {X | Y ⊆ X for some Y ∈ N(s)}."""
    return _lift(obj, superset_closure)


def complementation(obj: F) -> F:
    """N^z(s) = {X | X ∈ N(s) or S∖X ∈ N(s)}."""
    return _lift(obj, complement_closure)


@lru_cache(maxsize=1 << 16)
def _close_collection(coll: frozenset[int], full: int, flags: str) -> frozenset[int]:
    while True:
        before = coll
        if "m" in flags:
            coll = superset_closure(coll, full)
        if "c" in flags:
            coll = intersection_closure(coll, full)
        if "n" in flags:
            coll = coll | {full}
        if "z" in flags:
            coll = complement_closure(coll, full)
        if coll == before:
            return coll


def close_under(obj: F, props: PropertySet) -> F:
    """Least extension of every N(s) that has all flagged properties.

    Applies superset, intersection, unit and complement closure in that order
    until nothing changes.  Limited to 5 states (|P(S)| ≤ 32).
    """
    size = obj.frame.size if isinstance(obj, Model) else obj.size
    if size > MAX_CLOSURE_STATES:
        raise BoundExceeded(f"close_under supports at most {MAX_CLOSURE_STATES} states")
    flags = props.flags
    if not flags:
        return obj
    return _lift(obj, lambda coll, full: _close_collection(coll, full, flags))


def star_translate(f: Formula) -> Formula:
    """⋆-translation from L(Δ) into L(□): (Δφ)⋆ = □φ⋆ ∨ □¬φ⋆."""
    if isinstance(f, Box):
        raise ValueError("star translation takes an L(Δ) formula; input contains B")
    if isinstance(f, Delta):
        g = star_translate(f.sub)
        return Or(Box(g), Box(Not(g)))
    if isinstance(f, Not):
        return Not(star_translate(f.sub))
    if isinstance(f, (And, Or, Imp, Iff)):
        return type(f)(star_translate(f.left), star_translate(f.right))
    if isinstance(f, (Atom, Meta, Top, Bot)):
        return f
    raise TypeError(f"not a formula: {f!r}")
