"""Plain-text model format.

::

    states: s t u
    N s: {t u} {s t u}
    N t: {s t u}
    V p: s

Lines may come in any order.  ``{}`` is the empty set, a state without an
``N`` line has no neighborhoods, an atom without a ``V`` line is false
everywhere.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from pathlib import Path

from .semantics import Frame, Model, members

_SET_RE = re.compile(r"\{([^{}]*)\}")
_ATOM_RE = re.compile(r"[a-z][a-z0-9_]*")


class ModelFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<model>"):
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")
        self.line = line
        self.source = source


def loads(text: str, source: str = "<model>") -> Model:
    states: list[str] | None = None
    states_line = None
    nbhd: dict[str, tuple[int, list[list[str]]]] = {}
    val: dict[str, tuple[int, list[str]]] = {}

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        if not sep:
            raise ModelFormatError("expected 'key: value'", lineno, source)
        words = head.split()
        body = body.strip()
        if words == ["states"]:
            if states is not None:
                raise ModelFormatError("duplicate 'states' line", lineno, source)
            states = body.split()
            states_line = lineno
            if not states:
                raise ModelFormatError("at least one state is required", lineno, source)
            if len(set(states)) != len(states):
                raise ModelFormatError("duplicate state name", lineno, source)
        elif len(words) == 2 and words[0] == "N":
            if words[1] in nbhd:
                raise ModelFormatError(f"duplicate N line for {words[1]}", lineno, source)
            leftover = _SET_RE.sub("", body).strip()
            if leftover:
                raise ModelFormatError(f"expected subsets in braces, got {leftover!r}", lineno, source)
            nbhd[words[1]] = (lineno, [m.group(1).split() for m in _SET_RE.finditer(body)])
        elif len(words) == 2 and words[0] == "V":
            if not _ATOM_RE.fullmatch(words[1]):
                raise ModelFormatError(f"bad atom name {words[1]!r}", lineno, source)
            if words[1] in val:
                raise ModelFormatError(f"duplicate V line for {words[1]}", lineno, source)
            val[words[1]] = (lineno, body.strip("{} ").split())
        else:
            raise ModelFormatError(f"unknown line kind {head.strip()!r}", lineno, source)

    if states is None:
        raise ModelFormatError("missing 'states' line", None, source)
    index = {s: i for i, s in enumerate(states)}

    def mask(names: list[str], lineno: int) -> int:
        out = 0
        for name in names:
            if name not in index:
                raise ModelFormatError(f"unknown state {name!r}", lineno, source)
            out |= 1 << index[name]
        return out

    colls = []
    for s in states:
        lineno, subsets = nbhd.get(s, (states_line, []))
        colls.append(frozenset(mask(x, lineno) for x in subsets))
    for s, (lineno, _) in nbhd.items():
        if s not in index:
            raise ModelFormatError(f"unknown state {s!r}", lineno, source)
    try:
        frame = Frame(tuple(states), tuple(colls))
    except ValueError as e:
        raise ModelFormatError(str(e), states_line, source) from None
    return Model(frame, {p: mask(xs, lineno) for p, (lineno, xs) in val.items()})


def load(path: str | Path) -> Model:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ModelFormatError(e.strerror or str(e), None, str(path)) from None
    return loads(text, str(path))


def subset_key(x: int) -> tuple[int, list[int]]:
    return (bin(x).count("1"), members(x))


def format_subset(frame: Frame, x: int) -> str:
    return "{" + " ".join(frame.names(x)) + "}"


def dumps(obj: Model | Frame) -> str:
    """Canonical text: subsets ordered by size, then by state order."""
    model = obj if isinstance(obj, Model) else Model(obj)
    frame = model.frame
    lines = ["states: " + " ".join(frame.states)]
    for name, coll in zip(frame.states, frame.neighborhoods):
        parts = [format_subset(frame, x) for x in sorted(coll, key=subset_key)]
        lines.append(f"N {name}: " + " ".join(parts) if parts else f"N {name}:")
    for p in sorted(model.valuation):
        names = frame.names(model.valuation[p])
        lines.append(f"V {p}: " + " ".join(names) if names else f"V {p}:")
    return "\n".join(lines) + "\n"


def dump(obj: Model | Frame, path: str | Path) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")
