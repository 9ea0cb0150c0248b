"""Formulas of L(Δ) and L(□): AST, parser, printer, substitution, tautology check.

Surface grammar (ASCII, loosest to tightest)::

    f ::= f <-> f          (non-associative)
        | f -> f           (right-associative)
        | f | f            (left-associative)
        | f & f            (left-associative)
        | ~f | Df | Bf     (unary)
        | atom | T | F | phi | psi | chi | ( f )

Atoms are ``[a-z][a-z0-9_]*``.  ``phi``, ``psi`` and ``chi`` are reserved as
schema metavariables.  Unicode input aliases: ¬ ∧ ∨ → ↔ Δ □ ⊤ ⊥ φ ψ χ.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

__all__ = [
    "Atom", "Meta", "Top", "Bot", "Not", "And", "Or", "Imp", "Iff", "Delta", "Box",
    "Formula", "Substitution", "METAVARIABLES", "FormulaSyntaxError", "UnboundMetavariable",
    "parse", "print_formula", "instantiate", "is_tautology_instance",
    "atoms", "metavariables", "depth", "subformulas", "has_box", "has_delta",
]

METAVARIABLES = ("phi", "psi", "chi")


class FormulaSyntaxError(ValueError):
    """Raised on malformed formula text; ``column`` is 1-based."""

    def __init__(self, message: str, column: int, text: str = ""):
        super().__init__(f"{message} at column {column}")
        self.column = column
        self.text = text


class UnboundMetavariable(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"metavariable {self.name} is unbound"


# --- AST -------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Atom:
    name: str

    def __post_init__(self):
        if not _ATOM_RE.fullmatch(self.name) or self.name in METAVARIABLES:
            raise ValueError(f"invalid atom name {self.name!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Meta:
    """Schema metavariable (phi, psi, chi)."""

    name: str

    def __post_init__(self):
        if self.name not in METAVARIABLES:
            raise ValueError(f"invalid metavariable {self.name!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Top:
    def __str__(self) -> str:
        return "T"


@dataclass(frozen=True, slots=True)
class Bot:
    def __str__(self) -> str:
        return "F"


@dataclass(frozen=True, slots=True)
class Not:
    sub: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True, slots=True)
class Delta:
    sub: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True, slots=True)
class Box:
    sub: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True, slots=True)
class Imp:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True, slots=True)
class Iff:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


Formula = Union[Atom, Meta, Top, Bot, Not, And, Or, Imp, Iff, Delta, Box]
Substitution = Mapping[str, Formula]

UNARY = (Not, Delta, Box)
BINARY = (And, Or, Imp, Iff)
MODAL = (Delta, Box)


def children(f: Formula) -> tuple:
    if isinstance(f, UNARY):
        return (f.sub,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk over all subformula occurrences, ``f`` included."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def atoms(f: Formula) -> list[str]:
    """Atom names in order of first occurrence."""
    seen: dict[str, None] = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            seen.setdefault(g.name)
    return list(seen)


def metavariables(f: Formula) -> list[str]:
    seen: dict[str, None] = {}
    for g in subformulas(f):
        if isinstance(g, Meta):
            seen.setdefault(g.name)
    return list(seen)


def depth(f: Formula) -> int:
    """Modal depth: maximal nesting of Δ/□."""
    if isinstance(f, MODAL):
        return 1 + depth(f.sub)
    return max((depth(c) for c in children(f)), default=0)


def has_box(f: Formula) -> bool:
    return any(isinstance(g, Box) for g in subformulas(f))


def has_delta(f: Formula) -> bool:
    return any(isinstance(g, Delta) for g in subformulas(f))


# --- lexer / parser --------------------------------------------------------

_ATOM_RE = re.compile(r"[a-z][a-z0-9_]*")

_ALIASES = {
    "¬": "~", "∧": "&", "∨": "|", "→": "->", "↔": "<->",
    "Δ": "D", "□": "B", "⊤": "T", "⊥": "F",
    "φ": "phi", "ψ": "psi", "χ": "chi",
}

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<op><->|->|[~&|()DBTF¬∧∨→↔Δ□⊤⊥])|(?P<meta>[φψχ])|(?P<ident>[a-z][a-z0-9_]*)"
)


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos + 1, text)
        if m.lastgroup != "ws":
            tok = m.group()
            tokens.append((_ALIASES.get(tok, tok), pos + 1))
        pos = m.end()
    tokens.append(("", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def column(self) -> int:
        return self.tokens[self.i][1]

    def advance(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def error(self, message: str):
        raise FormulaSyntaxError(message, self.column(), self.text)

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek() != "":
            self.error(f"unexpected {self.peek()!r}")
        return f

    def iff(self) -> Formula:
        left = self.imp()
        if self.peek() == "<->":
            self.advance()
            right = self.imp()
            if self.peek() == "<->":
                self.error("chained '<->' needs parentheses")
            return Iff(left, right)
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.advance()
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.advance()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.advance()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.advance()
            return Not(self.unary())
        if tok == "D":
            self.advance()
            return Delta(self.unary())
        if tok == "B":
            self.advance()
            return Box(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.peek()
        if tok == "(":
            self.advance()
            f = self.iff()
            if self.peek() != ")":
                self.error("expected ')'")
            self.advance()
            return f
        if tok == "T":
            self.advance()
            return Top()
        if tok == "F":
            self.advance()
            return Bot()
        if tok in METAVARIABLES:
            self.advance()
            return Meta(tok)
        if tok and _ATOM_RE.fullmatch(tok):
            self.advance()
            return Atom(tok)
        self.error("unexpected end of input" if tok == "" else f"unexpected {tok!r}")


def parse(text: str) -> Formula:
    """Parse formula text.  Raises :class:`FormulaSyntaxError` with a 1-based column."""
    return _Parser(text).parse()


# --- printer ---------------------------------------------------------------

_PREC = {Iff: 1, Imp: 2, Or: 3, And: 4}
_SYMBOL = {Iff: " <-> ", Imp: " -> ", Or: " | ", And: " & ", Not: "~", Delta: "D", Box: "B"}
_ATOMIC_PREC = 6


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), _ATOMIC_PREC if not isinstance(f, UNARY) else 5)


def print_formula(f: Formula) -> str:
    """Render ``f`` so that ``parse`` returns it again.

    Parentheses appear where precedence requires them, plus around ``&``
    under ``|`` and ``->`` under ``<->``.
    """
    if isinstance(f, (Atom, Meta)):
        return f.name
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bot):
        return "F"
    if isinstance(f, UNARY):
        inner = print_formula(f.sub)
        if _prec(f.sub) < 5:
            inner = f"({inner})"
        return _SYMBOL[type(f)] + inner
    p = _PREC[type(f)]
    left, right = print_formula(f.left), print_formula(f.right)
    lp, rp = _prec(f.left), _prec(f.right)
    if isinstance(f, Imp):
        # right-associative
        wrap_left, wrap_right = lp <= p, rp < p
    elif isinstance(f, Iff):
        # implications under <-> are bracketed for readability
        wrap_left, wrap_right = lp <= _PREC[Imp], rp <= _PREC[Imp]
    elif isinstance(f, Or):
        wrap_left, wrap_right = lp <= _PREC[And], rp <= _PREC[And]
    else:
        wrap_left, wrap_right = lp < p, rp <= p
    if wrap_left:
        left = f"({left})"
    if wrap_right:
        right = f"({right})"
    return left + _SYMBOL[type(f)] + right


# --- substitution ----------------------------------------------------------


def instantiate(schema: Formula, subst: Substitution) -> Formula:
    """Simultaneously replace every metavariable of ``schema`` by its binding."""
    if isinstance(schema, Meta):
        try:
            return subst[schema.name]
        except KeyError:
            raise UnboundMetavariable(schema.name) from None
    if isinstance(schema, UNARY):
        return type(schema)(instantiate(schema.sub, subst))
    if isinstance(schema, BINARY):
        return type(schema)(instantiate(schema.left, subst), instantiate(schema.right, subst))
    return schema


# --- propositional tautology check -----------------------------------------


def _abstract(f: Formula, table: dict) -> Formula:
    if isinstance(f, (Atom, Meta) + MODAL):
        # identical subformulas share a slot; atoms and maximal modal parts alike
        return table.setdefault(f, len(table))
    if isinstance(f, Not):
        return ("~", _abstract(f.sub, table))
    if isinstance(f, BINARY):
        return (type(f), _abstract(f.left, table), _abstract(f.right, table))
    return f


def _truth_vector(node, columns: list[int], full: int) -> int:
    if isinstance(node, int):
        return columns[node]
    if isinstance(node, Top):
        return full
    if isinstance(node, Bot):
        return 0
    if node[0] == "~":
        return full & ~_truth_vector(node[1], columns, full)
    op, a, b = node
    x = _truth_vector(a, columns, full)
    y = _truth_vector(b, columns, full)
    if op is And:
        return x & y
    if op is Or:
        return x | y
    if op is Imp:
        return (full & ~x) | y
    return full & ~(x ^ y)


def is_tautology_instance(f: Formula) -> bool:
    """True iff ``f`` is a substitution instance of a propositional tautology.

    Every maximal Δ/□ subformula is treated as an opaque letter, then all
    rows of the truth table are checked at once as bits of an integer.
    """
    table: dict = {}
    skeleton = _abstract(f, table)
    k = len(table)
    rows = 1 << k
    full = (1 << rows) - 1
    columns = []
    for i in range(k):
        # bit r of column i is the value of letter i in row r
        block = (1 << (1 << i)) - 1
        pattern = 0
        for start in range(1 << i, rows, 1 << (i + 1)):
            pattern |= block << start
        columns.append(pattern)
    return _truth_vector(skeleton, columns, full) == full
