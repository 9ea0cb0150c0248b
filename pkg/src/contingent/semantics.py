"""Finite neighborhood frames and models, truth sets, and validity.

Subsets of the state set are bitmasks: state ``i`` is bit ``1 << i``.
A frame stores, for every state, the frozenset of bitmasks in N(s).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .syntax import (
    Atom, Bot, Box, Delta, Formula, Iff, Imp, Meta, Not, Or, And, Top,
    atoms, metavariables,
)

MAX_STATES = 30
STATE_NAMES = ("s", "t", "u", "v", "w")


class UnknownState(KeyError):
    def __str__(self) -> str:
        return f"unknown state {self.args[0]!r}"


class BoundExceeded(ValueError):
    """A size bound required by an exhaustive or closure operation was exceeded."""


def default_state_names(n: int) -> tuple[str, ...]:
    if n <= len(STATE_NAMES):
        return STATE_NAMES[:n]
    return tuple(f"s{i}" for i in range(n))


def members(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


@dataclass(frozen=True)
class PropertySet:
    """Frame-class flags: (m) supersets, (c) intersections, (n) unit, (z) complements."""

    m: bool = False
    c: bool = False
    n: bool = False
    z: bool = False

    @classmethod
    def parse(cls, text: str) -> "PropertySet":
        """``"mc"``, ``"(cnz)"``, ``"none"`` or ``""``."""
        text = text.strip().strip("()").lower()
        if text in ("", "none", "all-frames", "-"):
            return cls()
        bad = set(text) - set("mcnz")
        if bad:
            raise ValueError(f"unknown property flag(s): {''.join(sorted(bad))}")
        return cls(*(ch in text for ch in "mcnz"))

    @property
    def flags(self) -> str:
        return "".join(ch for ch in "mcnz" if getattr(self, ch))

    def __str__(self) -> str:
        return f"({self.flags})" if self.flags else "(all)"

    def __le__(self, other: "PropertySet") -> bool:
        return set(self.flags) <= set(other.flags)


@dataclass(frozen=True)
class Frame:
    states: tuple[str, ...]
    neighborhoods: tuple[frozenset[int], ...]

    def __post_init__(self):
        n = len(self.states)
        if not 1 <= n <= MAX_STATES:
            raise ValueError(f"frames need 1..{MAX_STATES} states, got {n}")
        if len(set(self.states)) != n:
            raise ValueError("duplicate state names")
        if len(self.neighborhoods) != n:
            raise ValueError("one neighborhood collection per state is required")
        full = (1 << n) - 1
        for coll in self.neighborhoods:
            for x in coll:
                if x < 0 or x & ~full:
                    raise ValueError(f"neighborhood {x:#b} is not a subset of the states")
        object.__setattr__(self, "neighborhoods", tuple(frozenset(c) for c in self.neighborhoods))

    @classmethod
    def from_sets(cls, states: Sequence[str], nbhd: Mapping[str, Iterable[Iterable[str]]]) -> "Frame":
        """Build from state names, e.g. ``{"s": [["t", "u"], ["s", "t", "u"]]}``."""
        states = tuple(states)
        index = {name: i for i, name in enumerate(states)}

        def mask(xs):
            try:
                return sum(1 << index[x] for x in set(xs))
            except KeyError as e:
                raise UnknownState(e.args[0]) from None

        colls = [frozenset(mask(x) for x in nbhd.get(name, ())) for name in states]
        return cls(states, tuple(colls))

    @classmethod
    def from_codes(cls, codes: Sequence[int], states: Sequence[str] | None = None) -> "Frame":
        """Each code is a 2^n-bit integer whose bit X marks X ∈ N(s)."""
        n = len(codes)
        colls = tuple(frozenset(x for x in range(1 << n) if code >> x & 1) for code in codes)
        return cls(tuple(states) if states else default_state_names(n), colls)

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def full(self) -> int:
        return (1 << len(self.states)) - 1

    @property
    def codes(self) -> tuple[int, ...]:
        return tuple(sum(1 << x for x in coll) for coll in self.neighborhoods)

    def index(self, state: str | int) -> int:
        if isinstance(state, int) and not isinstance(state, bool):
            if 0 <= state < self.size:
                return state
            raise UnknownState(state)
        try:
            return self.states.index(state)
        except ValueError:
            raise UnknownState(state) from None

    def names(self, mask: int) -> list[str]:
        return [self.states[i] for i in members(mask)]

    @cached_property
    def box_table(self) -> np.ndarray:
        """``box_table[X]`` is the bitmask of states ``s`` with ``X ∈ N(s)``."""
        table = np.zeros(1 << self.size, dtype=np.int64)
        for s, coll in enumerate(self.neighborhoods):
            for x in coll:
                table[x] |= 1 << s
        return table

    @cached_property
    def delta_table(self) -> np.ndarray:
        box = self.box_table
        return box | box[self.full ^ np.arange(1 << self.size)]


@dataclass(frozen=True, eq=True)
class Model:
    frame: Frame
    valuation: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        full = self.frame.full
        for name, x in self.valuation.items():
            if x < 0 or x & ~full:
                raise ValueError(f"valuation of {name} is not a subset of the states")
        object.__setattr__(self, "valuation", dict(self.valuation))

    __hash__ = None  # valuation is a dict

    @classmethod
    def from_sets(cls, frame: Frame, valuation: Mapping[str, Iterable[str]]) -> "Model":
        return cls(frame, {p: sum(1 << frame.index(x) for x in set(xs)) for p, xs in valuation.items()})

    @property
    def states(self) -> tuple[str, ...]:
        return self.frame.states

    def with_frame(self, frame: Frame) -> "Model":
        return Model(frame, self.valuation)


# --- truth ------------------------------------------------------------------


def truth_set(model: Model, f: Formula) -> int:
    """φ^M as a bitmask.  Unvalued atoms denote the empty set."""
    frame = model.frame
    full = frame.full
    nbhd = frame.neighborhoods

    def go(g: Formula) -> int:
        if isinstance(g, Atom):
            return model.valuation.get(g.name, 0)
        if isinstance(g, Top):
            return full
        if isinstance(g, Bot):
            return 0
        if isinstance(g, Not):
            return full ^ go(g.sub)
        if isinstance(g, And):
            return go(g.left) & go(g.right)
        if isinstance(g, Or):
            return go(g.left) | go(g.right)
        if isinstance(g, Imp):
            return (full ^ go(g.left)) | go(g.right)
        if isinstance(g, Iff):
            return full ^ (go(g.left) ^ go(g.right))
        if isinstance(g, Box):
            x = go(g.sub)
            return sum(1 << s for s, coll in enumerate(nbhd) if x in coll)
        if isinstance(g, Delta):
            x = go(g.sub)
            y = full ^ x
            return sum(1 << s for s, coll in enumerate(nbhd) if x in coll or y in coll)
        if isinstance(g, Meta):
            raise ValueError(f"cannot evaluate metavariable {g.name}")
        raise TypeError(f"not a formula: {g!r}")

    return go(f)


def evaluate(model: Model, state: str | int, f: Formula) -> bool:
    """M, s ⊨ f."""
    return bool(truth_set(model, f) >> model.frame.index(state) & 1)


def truth_vectors(frame: Frame, f: Formula, columns: Mapping[str, np.ndarray]) -> np.ndarray:
    """Truth sets of ``f`` under many valuations at once.

    ``columns[p][k]`` is the extension of ``p`` in valuation ``k``; the result
    holds the truth-set bitmask for each ``k``.
    """
    full = frame.full
    box, delta = frame.box_table, frame.delta_table
    shape = next(iter(columns.values())).shape if columns else (1,)

    def go(g: Formula) -> np.ndarray:
        if isinstance(g, Atom):
            col = columns.get(g.name)
            return col if col is not None else np.zeros(shape, dtype=np.int64)
        if isinstance(g, Top):
            return np.full(shape, full, dtype=np.int64)
        if isinstance(g, Bot):
            return np.zeros(shape, dtype=np.int64)
        if isinstance(g, Not):
            return full ^ go(g.sub)
        if isinstance(g, And):
            return go(g.left) & go(g.right)
        if isinstance(g, Or):
            return go(g.left) | go(g.right)
        if isinstance(g, Imp):
            return (full ^ go(g.left)) | go(g.right)
        if isinstance(g, Iff):
            return full ^ (go(g.left) ^ go(g.right))
        if isinstance(g, Box):
            return box[go(g.sub)]
        if isinstance(g, Delta):
            return delta[go(g.sub)]
        if isinstance(g, Meta):
            raise ValueError(f"formula contains metavariable {g.name}")
        raise TypeError(f"not a formula: {g!r}")

    return go(f)


def valuation_columns(n: int, names: Sequence[str]) -> dict[str, np.ndarray]:
    """All (2^n)^k valuations of ``names``; the first atom varies fastest."""
    k = len(names)
    index = np.arange(1 << (n * k), dtype=np.int64)
    full = (1 << n) - 1
    return {p: (index >> (n * i)) & full for i, p in enumerate(names)}


_COLUMN_CACHE: dict[tuple[int, tuple[str, ...]], dict[str, np.ndarray]] = {}


def _columns(n: int, names: tuple[str, ...]) -> dict[str, np.ndarray]:
    key = (n, names)
    cols = _COLUMN_CACHE.get(key)
    if cols is None:
        if n * len(names) > 24:
            raise BoundExceeded(f"{len(names)} atoms over {n} states: too many valuations")
        cols = _COLUMN_CACHE[key] = valuation_columns(n, names)
    return cols


def falsifying_valuation(frame: Frame, f: Formula) -> tuple[Model, str] | None:
    """First (valuation, state) in canonical order at which ``f`` fails, if any."""
    if metavariables(f):
        raise ValueError(f"formula contains metavariables: {', '.join(metavariables(f))}")
    names = tuple(atoms(f))
    truth = truth_vectors(frame, f, _columns(frame.size, names))
    bad = np.flatnonzero(truth != frame.full)
    if bad.size == 0:
        return None
    k = int(bad[0])
    n = frame.size
    valuation = {p: (k >> (n * i)) & frame.full for i, p in enumerate(names)}
    missing = frame.full & ~int(truth[k])
    state = (missing & -missing).bit_length() - 1
    return Model(frame, valuation), frame.states[state]


def is_valid_in_frame(frame: Frame, f: Formula) -> bool:
    """F ⊨ f, deciding over every valuation of the atoms that occur in ``f``."""
    return falsifying_valuation(frame, f) is None


# --- frame properties -------------------------------------------------------


def collection_has(coll: frozenset[int], full: int, props: PropertySet) -> bool:
    """Whether one neighborhood collection N(s) satisfies every flagged property."""
    if props.n and full not in coll:
        return False
    if props.z and any(full ^ x not in coll for x in coll):
        return False
    if props.m:
        # closure under one-element extensions implies closure under all supersets
        for x in coll:
            rest = full & ~x
            while rest:
                bit = rest & -rest
                if x | bit not in coll:
                    return False
                rest ^= bit
    if props.c:
        xs = list(coll)
        for i, x in enumerate(xs):
            for y in xs[i + 1:]:
                if x & y not in coll:
                    return False
    return True


def check_property(frame: Frame, props: PropertySet) -> bool:
    full = frame.full
    return all(collection_has(coll, full, props) for coll in frame.neighborhoods)


def property_report(frame: Frame) -> dict[str, bool]:
    return {ch: check_property(frame, PropertySet.parse(ch)) for ch in "mcnz"}


def frame_label(frame: Frame) -> str | None:
    """``"filter"``, ``"quasi-filter"`` or None."""
    if check_property(frame, PropertySet(m=True, c=True, n=True)):
        return "filter"
    if check_property(frame, PropertySet(m=True, c=True)):
        return "quasi-filter"
    return None


# --- validity on a class ------------------------------------------------------


@dataclass(frozen=True)
class Exhaustive:
    def __str__(self) -> str:
        return "exhaustive"


@dataclass(frozen=True)
class Sample:
    count: int
    seed: int

    def __str__(self) -> str:
        return f"sample({self.count},seed={self.seed})"


Mode = Exhaustive | Sample


@dataclass(eq=False)
class ClassVerdict:
    """Outcome of a bounded class check; never a claim of unbounded validity."""

    valid_up_to_bound: bool
    max_size: int
    frames_examined: int
    countermodel: Model | None = None
    state: str | None = None

    @property
    def label(self) -> str:
        return "valid_up_to_bound" if self.valid_up_to_bound else "countermodel"

    def __str__(self) -> str:
        if self.valid_up_to_bound:
            return f"valid up to size {self.max_size} (bounded; {self.frames_examined} frames)"
        return f"countermodel at state {self.state} (size {self.countermodel.frame.size})"


def is_valid_on_class(
    props: PropertySet,
    f: Formula,
    max_size: int,
    mode: Mode = Exhaustive(),
    *,
    min_size: int = 1,
    workers: int = 1,
) -> ClassVerdict:
    """Search the frames with ``props`` of size ``min_size..max_size`` for a countermodel.

    Any countermodel returned has been re-checked with :func:`evaluate` and
    :func:`check_property`.
    """
    # frame generation lives in search, which imports this module
    from .search import scan_class

    if max_size < 1 or min_size < 1 or min_size > max_size:
        raise ValueError("need 1 <= min_size <= max_size")
    verdict = scan_class(props, f, max_size, mode, min_size=min_size, workers=workers)
    if verdict.countermodel is not None:
        m, s = verdict.countermodel, verdict.state
        if evaluate(m, s, f) or not check_property(m.frame, props):
            raise AssertionError("countermodel failed independent re-verification")
    return verdict
