"""Axiom schemas, the Δ-system lattice, and a Hilbert-style derivation checker.

The checker knows three ways to justify a line: a propositional tautology
instance, an axiom instance under an explicit substitution, and the rules
MP (φ, φ→ψ / ψ) and REΔ (φ↔ψ / Δφ↔Δψ).  Matching is exact syntactic
equality; there is no normalization and no unification.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence, Union

from .syntax import (
    Delta, Formula, FormulaSyntaxError, Iff, Imp, METAVARIABLES, UnboundMetavariable,
    instantiate, is_tautology_instance, metavariables, parse, print_formula,
)


class ProofError(ValueError):
    """Unknown system or schema, or a malformed derivation."""


# --- schemas -----------------------------------------------------------------


@dataclass(frozen=True)
class Schema:
    name: str
    pattern: Formula
    display: str
    language: str = "delta"

    @property
    def metavariables(self) -> list[str]:
        return [v for v in METAVARIABLES if v in metavariables(self.pattern)]

    def instance(self, atoms: Sequence[str] = ("p", "q", "r")) -> Formula:
        """Canonical instance: metavariables φ, ψ, χ become ``atoms`` in order."""
        from .syntax import Atom

        return instantiate(self.pattern, {v: Atom(a) for v, a in zip(self.metavariables, atoms)})


def _schema(name: str, text: str, display: str, language: str = "delta") -> Schema:
    return Schema(name, parse(text), display, language)


SCHEMAS: dict[str, Schema] = {
    s.name: s
    for s in [
        _schema("dEqu", "Dphi <-> D~phi", "ΔEqu"),
        _schema("dM", "Dphi -> D(phi | psi) | D(~phi | chi)", "ΔM"),
        _schema("dC", "Dphi & Dpsi -> D(phi & psi)", "ΔC"),
        _schema("dN", "DT", "ΔN"),
        _schema("sdM", "Dphi -> D(phi | psi)", "sΔM"),
        _schema("dM'", "Dphi -> D(phi -> psi) | D(~phi -> chi)", "ΔM′"),
        _schema("dC'", "D(psi -> phi) & D(~psi -> phi) -> Dphi", "ΔC′"),
        _schema("M", "B(phi & psi) -> Bphi & Bpsi", "M", "box"),
        _schema("C", "Bphi & Bpsi -> B(phi & psi)", "C", "box"),
        _schema("N", "BT", "N", "box"),
        _schema("Z", "Bphi -> B~phi", "Z", "box"),
    ]
}


def get_schema(name: str) -> Schema:
    aliases = {s.display: s.name for s in SCHEMAS.values()}
    key = aliases.get(name, name)
    try:
        return SCHEMAS[key]
    except KeyError:
        raise ProofError(f"unknown schema {name!r}") from None


# --- systems -----------------------------------------------------------------


class Status(Enum):
    AXIOMATIZED = "axiomatized"
    CONJECTURED = "conjectured"
    SEMANTIC_ONLY = "semantic-only"


@dataclass(frozen=True)
class System:
    name: str
    display: str
    schemas: frozenset[str]
    status: Status
    frame_class: str  # property flags, "" for all frames
    aliases: tuple[str, ...] = ()

    @property
    def label(self) -> str:
        if self.status is Status.CONJECTURED:
            return f"{self.display} (conjectured axiomatization)"
        if self.status is Status.SEMANTIC_ONLY:
            return f"{self.display} (no known axiomatization)"
        return self.display


def _system(name, display, schemas, status, frame_class, aliases=()):
    return System(name, display, frozenset(schemas), Status(status), frame_class, tuple(aliases))


_E = {"dEqu"}
_M = _E | {"dM"}
_MZ = _E | {"sdM"}

SYSTEMS: dict[str, System] = {
    s.name: s
    for s in [
        _system("E-delta", "E^Δ", _E, "axiomatized", "", ["EZ-delta"]),
        _system("M-delta", "M^Δ", _M, "axiomatized", "m", ["EM-delta"]),
        _system("ECZ-delta", "ECZ^Δ", _E | {"dC"}, "axiomatized", "cz"),
        _system("EN-delta", "EN^Δ", _E | {"dN"}, "axiomatized", "n", ["ENZ-delta"]),
        _system("R-delta", "R^Δ", _M | {"dC"}, "axiomatized", "mc", ["EMC-delta"]),
        _system("EMN-delta", "EMN^Δ", _M | {"dN"}, "axiomatized", "mn"),
        _system("ECNZ-delta", "ECNZ^Δ", _E | {"dC", "dN"}, "axiomatized", "cnz"),
        _system("K-delta", "K^Δ", _M | {"dC", "dN"}, "axiomatized", "mcn", ["EMCN-delta"]),
        _system("MZ-delta", "MZ^Δ", _MZ, "conjectured", "mz", ["EMZ-delta"]),
        _system("RZ-delta", "RZ^Δ", _MZ | {"dC"}, "conjectured", "mcz", ["EMCZ-delta"]),
        _system("EMNZ-delta", "EMNZ^Δ", _MZ | {"dN"}, "conjectured", "mnz"),
        _system("KZ-delta", "KZ^Δ", _MZ | {"dC", "dN"}, "conjectured", "mcnz", ["EMCNZ-delta"]),
        _system("EC-delta", "EC^Δ", (), "semantic-only", "c"),
        _system("ECN-delta", "ECN^Δ", (), "semantic-only", "cn"),
        # auxiliary systems for the replacement-axiom fixtures
        _system("M-delta+dC'", "M^Δ+ΔC′", _M | {"dC'"}, "axiomatized", "mc"),
        _system("E-delta+dM'", "E^Δ+ΔM′", _E | {"dM'"}, "axiomatized", "m"),
    ]
}

LATTICE_NODES = [name for name in SYSTEMS if "+" not in name]


def get_system(name: str) -> System:
    if name in SYSTEMS:
        return SYSTEMS[name]
    for s in SYSTEMS.values():
        if name in s.aliases or name == s.display:
            return s
    raise ProofError(f"unknown system {name!r}")


_EDGES = [
    ("E-delta", "M-delta"), ("E-delta", "EN-delta"), ("E-delta", "EC-delta"),
    ("EC-delta", "ECZ-delta"), ("EC-delta", "ECN-delta"),
    ("ECZ-delta", "R-delta"), ("ECZ-delta", "ECNZ-delta"),
    ("EN-delta", "ECN-delta"), ("EN-delta", "EMN-delta"),
    ("ECN-delta", "ECNZ-delta"), ("ECNZ-delta", "K-delta"),
    ("M-delta", "R-delta"), ("M-delta", "EMN-delta"), ("M-delta", "MZ-delta"),
    ("R-delta", "K-delta"), ("R-delta", "RZ-delta"),
    ("EMN-delta", "K-delta"), ("EMN-delta", "EMNZ-delta"),
    ("K-delta", "KZ-delta"),
    ("MZ-delta", "RZ-delta"), ("MZ-delta", "EMNZ-delta"),
    ("RZ-delta", "KZ-delta"), ("EMNZ-delta", "KZ-delta"),
]


def lattice_edges() -> list[tuple[str, str]]:
    """Arrows (weaker, stronger) of the 16-logic cube; E^Δ = EZ^Δ and EN^Δ = ENZ^Δ share nodes."""
    return list(_EDGES)


# --- derivations ---------------------------------------------------------------


@dataclass(frozen=True)
class Taut:
    def __str__(self) -> str:
        return "taut"


@dataclass(frozen=True)
class Axiom:
    schema: str
    subst: Mapping[str, Formula] = field(default_factory=dict)

    def __str__(self) -> str:
        binds = "; ".join(f"{k}={print_formula(v)}" for k, v in self.subst.items())
        return f"axiom {self.schema}" + (f" {binds}" if binds else "")

    def __hash__(self) -> int:
        return hash((self.schema, tuple(sorted(self.subst.items(), key=lambda kv: kv[0]))))


@dataclass(frozen=True)
class MP:
    """``minor`` holds φ, ``major`` holds φ → (this line)."""

    minor: int
    major: int

    def __str__(self) -> str:
        return f"mp {self.minor} {self.major}"


@dataclass(frozen=True)
class REDelta:
    premise: int

    def __str__(self) -> str:
        return f"re-delta {self.premise}"


Justification = Union[Taut, Axiom, MP, REDelta]


@dataclass(frozen=True)
class Line:
    index: int
    formula: Formula
    justification: Justification
    note: str = ""

    def __str__(self) -> str:
        return f"{self.index}. {print_formula(self.formula)}  {self.justification}"


@dataclass(frozen=True)
class Derivation:
    system: str
    lines: tuple[Line, ...]
    goal: Formula | None = None
    name: str = ""

    def replace_line(self, pos: int, formula: Formula) -> "Derivation":
        lines = list(self.lines)
        old = lines[pos]
        lines[pos] = Line(old.index, formula, old.justification, old.note)
        return Derivation(self.system, tuple(lines), self.goal, self.name)


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    line: int | None = None
    reason: str = ""
    system_label: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return f"ok ({self.system_label})" if self.system_label else "ok"
        where = f"line {self.line}" if self.line is not None else "derivation"
        return f"error at {where}: {self.reason}"


def check_derivation(d: Derivation) -> CheckResult:
    """Verify every line of ``d``; report the first failure.

    Raises :class:`ProofError` for an unknown system or one without an
    axiomatization.
    """
    system = get_system(d.system)
    if system.status is Status.SEMANTIC_ONLY:
        raise ProofError(f"{system.display} has no known axiomatization to check against")
    label = system.label
    proved: dict[int, Formula] = {}

    def fail(line: Line, reason: str) -> CheckResult:
        return CheckResult(False, line.index, reason, label)

    if not d.lines:
        return CheckResult(False, None, "empty derivation", label)
    for line in d.lines:
        if line.index in proved:
            return fail(line, f"duplicate line number {line.index}")
        f, j = line.formula, line.justification
        if metavariables(f):
            return fail(line, "line contains schema metavariables")
        cited = ()
        if isinstance(j, MP):
            cited = (j.minor, j.major)
        elif isinstance(j, REDelta):
            cited = (j.premise,)
        for i in cited:
            if i >= line.index:
                return fail(line, f"forward reference to line {i}")
            if i not in proved:
                return fail(line, f"cites missing line {i}")

        if isinstance(j, Taut):
            if not is_tautology_instance(f):
                return fail(line, "not a tautology instance")
        elif isinstance(j, Axiom):
            try:
                schema = get_schema(j.schema)
            except ProofError as e:
                return fail(line, str(e))
            if schema.name not in system.schemas:
                return fail(line, f"schema {schema.name} not in {system.display}")
            extra = set(j.subst) - set(schema.metavariables)
            if extra:
                return fail(line, f"binding for unused metavariable {', '.join(sorted(extra))}")
            try:
                expected = instantiate(schema.pattern, j.subst)
            except UnboundMetavariable as e:
                return fail(line, str(e))
            if expected != f:
                return fail(line, f"substitution mismatch: instance is {print_formula(expected)}")
        elif isinstance(j, MP):
            major = proved[j.major]
            if major != Imp(proved[j.minor], f):
                return fail(line, f"mp shape mismatch: line {j.major} is not line {j.minor} -> this line")
        elif isinstance(j, REDelta):
            premise = proved[j.premise]
            if not isinstance(premise, Iff):
                return fail(line, f"re-delta premise line {j.premise} is not a biconditional")
            if f != Iff(Delta(premise.left), Delta(premise.right)):
                return fail(line, "re-delta shape mismatch")
        else:
            return fail(line, f"unknown justification {j!r}")
        proved[line.index] = f

    if d.goal is not None and d.lines[-1].formula != d.goal:
        return fail(d.lines[-1], f"last line is not the goal {print_formula(d.goal)}")
    return CheckResult(True, None, "", label)


# --- derivation file format -------------------------------------------------------

_LINE_RE = re.compile(r"^(\d+)\.\s+(.*?)\s+(taut|axiom\s+\S+(?:\s+.*)?|mp\s+\d+\s+\d+|re-delta\s+\d+)\s*$")


class DerivationFormatError(ProofError):
    def __init__(self, message: str, line: int | None = None, source: str = "<derivation>"):
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")
        self.line = line
        self.source = source


def _parse_justification(text: str, lineno: int, source: str) -> Justification:
    words = text.split(None, 2)
    kind = words[0]
    if kind == "taut":
        return Taut()
    if kind == "mp":
        return MP(int(words[1]), int(words[2]))
    if kind == "re-delta":
        return REDelta(int(words[1]))
    subst: dict[str, Formula] = {}
    if len(words) > 2:
        for binding in words[2].split(";"):
            if not binding.strip():
                continue
            name, sep, value = binding.partition("=")
            name = name.strip()
            if not sep or name not in METAVARIABLES:
                raise DerivationFormatError(f"bad binding {binding.strip()!r}", lineno, source)
            if name in subst:
                raise DerivationFormatError(f"{name} bound twice", lineno, source)
            try:
                subst[name] = parse(value)
            except FormulaSyntaxError as e:
                raise DerivationFormatError(f"binding {name}: {e}", lineno, source) from None
    return Axiom(words[1], subst)


def loads_derivation(text: str, source: str = "<derivation>") -> Derivation:
    """Parse the line-oriented derivation format (``system:``, optional ``goal:``, numbered lines)."""
    system = None
    goal = None
    lines: list[Line] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("system:"):
            system = stripped.partition(":")[2].strip()
            continue
        if stripped.startswith("goal:"):
            try:
                goal = parse(stripped.partition(":")[2])
            except FormulaSyntaxError as e:
                raise DerivationFormatError(f"goal: {e}", lineno, source) from None
            continue
        m = _LINE_RE.match(stripped)
        if m is None:
            raise DerivationFormatError("expected '<n>. <formula>  <justification>'", lineno, source)
        try:
            formula = parse(m.group(2))
        except FormulaSyntaxError as e:
            raise DerivationFormatError(str(e), lineno, source) from None
        note = raw.split("#", 1)[1].strip() if "#" in raw else ""
        lines.append(Line(int(m.group(1)), formula, _parse_justification(m.group(3), lineno, source), note))
    if system is None:
        raise DerivationFormatError("missing 'system:' header", None, source)
    return Derivation(system, tuple(lines), goal, Path(source).stem)


def load_derivation(path: str | Path) -> Derivation:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DerivationFormatError(e.strerror or str(e), None, str(path)) from None
    return loads_derivation(text, str(path))


def dumps_derivation(d: Derivation) -> str:
    out = [f"system: {d.system}"]
    if d.goal is not None:
        out.append(f"goal: {print_formula(d.goal)}")
    for line in d.lines:
        out.append(str(line) + (f"  # {line.note}" if line.note else ""))
    return "\n".join(out) + "\n"
