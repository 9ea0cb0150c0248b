"""Frame enumeration, random frame generation, and bounded countermodel search.

Canonical enumeration order: sizes ascending; states are ``0..n-1``; each
N(s) is a 2^n-bit code (bit X set iff X ∈ N(s)) running through the
admissible codes in increasing order, with state 0 varying slowest.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from . import fixtures
from .semantics import (
    BoundExceeded, ClassVerdict, Exhaustive, Frame, Mode, Model, PropertySet, Sample,
    check_property, collection_has, default_state_names, evaluate, falsifying_valuation,
    is_valid_in_frame, is_valid_on_class,
)
from .proof import SCHEMAS, Schema, get_schema
from .syntax import Atom, Formula, instantiate, parse, print_formula
from .transform import close_under

DEFAULT_SEED = 20190417
MAX_EXHAUSTIVE = 3
MAX_SAMPLED = 5

DEFINING_FORMULAS = {
    "m": SCHEMAS["M"].instance(),
    "c": SCHEMAS["C"].instance(),
    "n": SCHEMAS["N"].instance(),
    "z": SCHEMAS["Z"].instance(),
}


# --- enumeration ---------------------------------------------------------------


@lru_cache(maxsize=None)
def admissible_codes(n: int, flags: str) -> tuple[int, ...]:
    """Codes of the neighborhood collections on ``n`` states having ``flags``."""
    props = PropertySet.parse(flags)
    full = (1 << n) - 1
    return tuple(
        code for code in range(1 << (1 << n))
        if collection_has(_collection(n, code), full, props)
    )


@lru_cache(maxsize=1 << 12)
def _collection(n: int, code: int) -> frozenset[int]:
    return frozenset(x for x in range(1 << n) if code >> x & 1)


def frame_from_codes(codes: Sequence[int]) -> Frame:
    n = len(codes)
    return Frame(default_state_names(n), tuple(_collection(n, c) for c in codes))


def frame_count(n: int, props: PropertySet = PropertySet()) -> int:
    return len(admissible_codes(n, props.flags)) ** n


def enumerate_frames(n: int, props: PropertySet = PropertySet(), *, first: int | None = None) -> Iterator[Frame]:
    """Every frame on ``n`` states with ``props``, once each, in canonical order.

    ``first`` pins the code of state 0 (used to split the space across workers).
    """
    if not 1 <= n <= MAX_EXHAUSTIVE:
        raise BoundExceeded(f"exhaustive enumeration supports 1..{MAX_EXHAUSTIVE} states, got {n}")
    codes = admissible_codes(n, props.flags)
    heads = codes if first is None else (first,)
    for head in heads:
        for rest in product(codes, repeat=n - 1):
            yield frame_from_codes((head,) + rest)


# --- sampling ------------------------------------------------------------------


def random_frame(n: int, rng: random.Random, props: PropertySet = PropertySet(),
                 density: float | None = None) -> Frame:
    """Random N(s) for every state, then closed under ``props``.

    Each subset joins N(s) independently with probability ``density``; when
    ``density`` is None it is drawn uniformly per frame so that small
    collections survive the closure repair.
    """
    if not 1 <= n <= MAX_SAMPLED:
        raise BoundExceeded(f"sampling supports 1..{MAX_SAMPLED} states, got {n}")
    p = rng.random() if density is None else density
    subsets = 1 << n
    colls = tuple(frozenset(x for x in range(subsets) if rng.random() < p) for _ in range(n))
    return close_under(Frame(default_state_names(n), colls), props)


def sample_frames(props: PropertySet, count: int, seed: int, min_size: int, max_size: int) -> Iterator[Frame]:
    rng = random.Random(seed)
    for _ in range(count):
        yield random_frame(rng.randint(min_size, max_size), rng, props)


def random_model(n: int, rng: random.Random, names: Sequence[str] = ("p", "q", "r"),
                 props: PropertySet = PropertySet()) -> Model:
    frame = random_frame(n, rng, props)
    return Model(frame, {p: rng.getrandbits(n) for p in names})


# --- class scans -------------------------------------------------------------


def _scan_chunk(args) -> tuple[int, tuple[int, ...] | None]:
    """Worker: scan frames whose state 0 has the given code; returns (frames, witness codes)."""
    n, flags, text, head = args
    f = parse(text)
    count = 0
    for frame in enumerate_frames(n, PropertySet.parse(flags), first=head):
        count += 1
        if falsifying_valuation(frame, f) is not None:
            return count, frame.codes
    return count, None


def scan_class(props: PropertySet, f: Formula, max_size: int, mode: Mode = Exhaustive(), *,
               min_size: int = 1, workers: int = 1) -> ClassVerdict:
    """First countermodel among the frames with ``props`` (see :func:`is_valid_on_class`)."""
    examined = 0
    if isinstance(mode, Sample):
        if max_size > MAX_SAMPLED:
            raise BoundExceeded(f"sampling supports at most {MAX_SAMPLED} states")
        for frame in sample_frames(props, mode.count, mode.seed, min_size, max_size):
            examined += 1
            hit = falsifying_valuation(frame, f)
            if hit:
                return ClassVerdict(False, max_size, examined, hit[0], hit[1])
        return ClassVerdict(True, max_size, examined)

    if max_size > MAX_EXHAUSTIVE:
        raise BoundExceeded(f"exhaustive search supports at most {MAX_EXHAUSTIVE} states")
    for n in range(min_size, max_size + 1):
        if workers > 1:
            text = print_formula(f)
            tasks = [(n, props.flags, text, head) for head in admissible_codes(n, props.flags)]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                # results come back in task order, so the first witness is canonical
                for count, codes in pool.map(_scan_chunk, tasks, chunksize=max(1, len(tasks) // (4 * workers))):
                    examined += count
                    if codes is not None:
                        model, state = falsifying_valuation(frame_from_codes(codes), f)
                        pool.shutdown(wait=False, cancel_futures=True)
                        return ClassVerdict(False, max_size, examined, model, state)
            continue
        for frame in enumerate_frames(n, props):
            examined += 1
            hit = falsifying_valuation(frame, f)
            if hit:
                return ClassVerdict(False, max_size, examined, hit[0], hit[1])
    return ClassVerdict(True, max_size, examined)


# --- reports -------------------------------------------------------------------


@dataclass
class SearchReport:
    target: str
    formula: Formula
    props: PropertySet
    max_size: int
    mode: Mode
    verdict: str
    frames_examined: int
    elapsed: float
    witness: Model | None = None
    state: str | None = None
    substitution: dict[str, str] = field(default_factory=dict)

    @property
    def falsified(self) -> bool:
        return self.witness is not None

    def reverify(self) -> bool:
        """Independent re-check of the witness: class membership and falsification."""
        if self.witness is None:
            return True
        return check_property(self.witness.frame, self.props) and not evaluate(self.witness, self.state, self.formula)

    def machine(self, timings: bool = False) -> str:
        fields = [
            f"item={self.target}",
            f"props={self.props.flags or '-'}",
            f"max={self.max_size}",
            f"mode={self.mode}",
            f"verdict={self.verdict}",
            f"frames={self.frames_examined}",
        ]
        if self.witness is not None:
            fields.append(f"state={self.state}")
            fields.append(f"size={self.witness.frame.size}")
        if timings:
            fields.append(f"elapsed_ms={self.elapsed * 1000:.0f}")
        return " ".join(fields)

    def human(self) -> str:
        from .modelfile import dumps

        head = f"{self.target}: {print_formula(self.formula)} on {self.props}-frames, size <= {self.max_size}, {self.mode}"
        if self.witness is None:
            return f"{head}\nvalid up to bound (bounded check, {self.frames_examined} frames; not a proof of validity)"
        return (
            f"{head}\ncountermodel after {self.frames_examined} frames, falsified at state {self.state}:\n"
            + dumps(self.witness)
        )


def _search(target: str, f: Formula, props: PropertySet, max_size: int, mode: Mode,
            substitution: dict[str, str], min_size: int, workers: int) -> SearchReport:
    start = time.perf_counter()
    v = is_valid_on_class(props, f, max_size, mode, min_size=min_size, workers=workers)
    elapsed = time.perf_counter() - start
    report = SearchReport(target, f, props, max_size, mode, v.label, v.frames_examined, elapsed,
                          v.countermodel, v.state, substitution)
    if not report.reverify():
        raise AssertionError("witness failed re-verification")
    return report


def find_countermodel(schema: Schema | str, props: PropertySet, max_size: int, mode: Mode = Exhaustive(),
                      atoms: Sequence[str] = ("p", "q", "r"), *, min_size: int = 1, workers: int = 1) -> SearchReport:
    """Instantiate ``schema`` with fresh atoms (φ, ψ, χ ↦ atoms) and search the class."""
    schema = get_schema(schema) if isinstance(schema, str) else schema
    if len(set(atoms[: len(schema.metavariables)])) < len(schema.metavariables):
        raise ValueError("instantiation atoms must be distinct")
    subst = dict(zip(schema.metavariables, atoms))
    f = instantiate(schema.pattern, {v: Atom(a) for v, a in subst.items()})
    return _search(schema.name, f, props, max_size, mode, subst, min_size, workers)


def search_formula(f: Formula, props: PropertySet, max_size: int, mode: Mode = Exhaustive(), *,
                   min_size: int = 1, workers: int = 1, label: str | None = None) -> SearchReport:
    return _search(label or print_formula(f).replace(" ", ""), f, props, max_size, mode, {}, min_size, workers)


# --- correspondence ----------------------------------------------------------------


@dataclass
class CorrespondenceReport:
    flag: str
    formula: Formula
    max_size: int
    mode: Mode
    frames_examined: int = 0
    with_property: int = 0
    discrepancy: tuple[Frame, bool, bool] | None = None

    @property
    def ok(self) -> bool:
        return self.discrepancy is None

    def machine(self) -> str:
        verdict = "pass" if self.ok else "fail"
        return (f"item=corr-{self.flag} verdict={verdict} frames={self.frames_examined} "
                f"with_property={self.with_property} mode={self.mode} max={self.max_size}")


def correspondence_check(flag: str, formula: Formula | None = None, max_size: int = 2,
                         mode: Mode = Exhaustive(), *, min_size: int = 1) -> CorrespondenceReport:
    """Check property ⟺ validity of its defining □-formula frame by frame.

    Sampled mode alternates unrestricted random frames with frames closed
    under the property, so both sides of the equivalence get exercised.
    """
    if flag not in DEFINING_FORMULAS:
        raise ValueError(f"unknown property {flag!r}")
    formula = DEFINING_FORMULAS[flag] if formula is None else formula
    props = PropertySet.parse(flag)
    report = CorrespondenceReport(flag, formula, max_size, mode)

    if isinstance(mode, Sample):
        rng = random.Random(mode.seed)

        def frames():
            for k in range(mode.count):
                n = rng.randint(min_size, max_size)
                yield random_frame(n, rng, props if k % 2 else PropertySet())
    else:
        if max_size > MAX_EXHAUSTIVE:
            raise BoundExceeded(f"exhaustive search supports at most {MAX_EXHAUSTIVE} states")

        def frames():
            for n in range(min_size, max_size + 1):
                yield from enumerate_frames(n)

    for frame in frames():
        report.frames_examined += 1
        has = check_property(frame, props)
        valid = is_valid_in_frame(frame, formula)
        report.with_property += has
        if has != valid:
            report.discrepancy = (frame, has, valid)
            break
    return report


# --- validity and invalidity items -------------------------------------------------


@dataclass
class ItemResult:
    item: str
    claim: str
    passed: bool
    frames: int
    elapsed: float
    detail: str = ""

    def machine(self, timings: bool = True) -> str:
        line = f"item={self.item} verdict={'pass' if self.passed else 'fail'} frames={self.frames}"
        if timings:
            line += f" elapsed_ms={self.elapsed * 1000:.0f}"
        return line

    def human(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] ({self.item}) {self.claim}" + (f" -- {self.detail}" if self.detail else "")


VALIDITY_ITEMS = {
    "i": ("n", "dN"),
    "ii": ("m", "dM"),
    "iii": ("cz", "dC"),
    "iv": ("mc", "dC"),
    "xi": ("mz", "sdM"),
}

# item -> (fixture, class flags, falsified formula, expected truth values at s)
INVALIDITY_ITEMS = {
    "v": ("item_v", "c", "Dp & D~p -> D(p & ~p)", {"Dp": True, "D~p": True, "D(p & ~p)": False}),
    "vi": ("item_vi", "cn", "Dp & Dq -> D(p & q)", {"Dp": True, "Dq": True, "D(p & q)": False}),
    "vii": ("item_vii", "mcn", "Dp -> D(p | q)", {"Dp": True, "D(p | q)": False}),
    "viii": ("item_vii", "m", "Dp -> D(p | q)", {}),
    "ix": ("item_vii", "mc", "Dp -> D(p | q)", {}),
    "x": ("item_vii", "mn", "Dp -> D(p | q)", {}),
}

ITEM_ORDER = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi")


def validity_item(item: str, samples: int = 10_000, seed: int = DEFAULT_SEED,
                  exhaustive_max: int = 2, sample_size: int = 3) -> ItemResult:
    flags, schema = VALIDITY_ITEMS[item]
    props = PropertySet.parse(flags)
    start = time.perf_counter()
    bounded = find_countermodel(schema, props, exhaustive_max, Exhaustive())
    frames = bounded.frames_examined
    sampled = None
    if not bounded.falsified and samples:
        sampled = find_countermodel(schema, props, sample_size, Sample(samples, seed), min_size=sample_size)
        frames += sampled.frames_examined
    passed = not bounded.falsified and not (sampled and sampled.falsified)
    detail = f"exhaustive <= {exhaustive_max}: {bounded.verdict}"
    if sampled:
        detail += f"; {samples} sampled at size {sample_size}: {sampled.verdict}"
    claim = f"{SCHEMAS[schema].display} valid on ({flags})-frames"
    return ItemResult(item, claim, passed, frames, time.perf_counter() - start, detail)


def invalidity_item(item: str) -> ItemResult:
    name, flags, text, expected = INVALIDITY_ITEMS[item]
    start = time.perf_counter()
    model = fixtures.model(name)
    props = PropertySet.parse(flags)
    problems = []
    if not check_property(model.frame, props):
        problems.append(f"fixture is not a ({flags})-model")
    for g, value in expected.items():
        if evaluate(model, "s", parse(g)) != value:
            problems.append(f"{g} at s should be {value}")
    if evaluate(model, "s", parse(text)):
        problems.append(f"{text} holds at s")
    claim = f"({flags})-model falsifying {text} at s"
    return ItemResult(item, claim, not problems, 1, time.perf_counter() - start, "; ".join(problems))


def paper_fixture_suite(items: Sequence[str] = ITEM_ORDER, samples: int = 10_000,
                        seed: int = DEFAULT_SEED) -> list[ItemResult]:
    """Reproduce the validity/invalidity items (i)-(xi) at bounded scale."""
    out = []
    for item in items:
        if item in VALIDITY_ITEMS:
            out.append(validity_item(item, samples, seed))
        elif item in INVALIDITY_ITEMS:
            out.append(invalidity_item(item))
        else:
            raise ValueError(f"unknown item {item!r}")
    return out
