"""A finitary conditional-belief logic: syntax, parser and model checker.

Concrete syntax::

    formula  = believes | neg | conj ;
    conj     = atomexp { "&" atomexp } ;
    atomexp  = believes | neg | atom | "(" formula ")" ;
    neg      = "!" atomexp ;
    believes = "B" "[" ident "," ident "," rational "]" "(" formula ")" ;
    atom     = "true" | ident ;
    rational = int [ "/" posint ] ;

A chain ``a & b & c`` becomes one n-ary :class:`And`; a parenthesised
conjunction inside a chain stays nested, so printing and re-parsing is the
identity on ASTs.  ``B[j,E,q](phi)`` holds where player ``j``, conditioning
on the event named ``E``, gives ``phi`` probability at least ``q``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import ParseError, ThresholdOutOfRange, UnknownEvent, UnknownPlayer, UnknownProposition
from .space import TOP, EventSet
from .structure import TypeStructure, p_belief


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Not:
    arg: Formula


@dataclass(frozen=True)
class And:
    args: tuple

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("And needs at least two conjuncts")


@dataclass(frozen=True)
class Believes:
    player: str
    event: str
    threshold: Fraction
    arg: Formula

    def __post_init__(self):
        if not 0 <= self.threshold <= 1:
            raise ThresholdOutOfRange(f"threshold {self.threshold} outside [0, 1]")


Formula = Union[Prop, Top, Not, And, Believes]


def depth(phi: Formula) -> int:
    """Nesting depth of belief operators."""
    if isinstance(phi, (Prop, Top)):
        return 0
    if isinstance(phi, And):
        return max(depth(a) for a in phi.args)
    if isinstance(phi, Not):
        return depth(phi.arg)
    return 1 + depth(phi.arg)


# -- printing ------------------------------------------------------------------


def print_formula(phi: Formula) -> str:
    if isinstance(phi, Top):
        return TOP
    if isinstance(phi, Prop):
        return phi.name
    if isinstance(phi, Not):
        return "!" + _atomexp(phi.arg)
    if isinstance(phi, And):
        return " & ".join(_atomexp(a) for a in phi.args)
    if isinstance(phi, Believes):
        return f"B[{phi.player},{phi.event},{phi.threshold}]({print_formula(phi.arg)})"
    raise TypeError(f"not a formula: {phi!r}")


def _atomexp(phi: Formula) -> str:
    text = print_formula(phi)
    return f"({text})" if isinstance(phi, And) else text


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>-?[0-9]+)|(?P<punct>[\[\](),&!/]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                rest = text[pos:]
                if rest.strip():
                    start = pos + len(rest) - len(rest.lstrip())
                    raise ParseError(f"unexpected character {text[start]!r}", self._bytes(start))
                break
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.tokens.append(("eof", "", len(text)))
        self.i = 0

    def _bytes(self, char_offset: int) -> int:
        return len(self.text[:char_offset].encode("utf-8"))

    def peek(self, ahead: int = 0):
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def fail(self, expected):
        kind, value, offset = self.peek()
        found = "end of input" if kind == "eof" else repr(value)
        raise ParseError(f"unexpected {found}", self._bytes(offset), expected)

    def expect(self, value: str):
        kind, tok, _ = self.peek()
        if kind != "punct" or tok != value:
            self.fail([repr(value)])
        self.i += 1

    def ident(self) -> str:
        kind, tok, _ = self.peek()
        if kind != "ident":
            self.fail(["identifier"])
        self.i += 1
        return tok

    def integer(self, positive=False) -> int:
        kind, tok, _ = self.peek()
        if kind != "int" or (positive and int(tok) <= 0):
            self.fail(["positive integer" if positive else "integer"])
        self.i += 1
        return int(tok)

    def parse(self) -> Formula:
        phi = self.formula()
        if self.peek()[0] != "eof":
            self.fail(["'&'", "end of input"])
        return phi

    def formula(self) -> Formula:
        first = self.atomexp()
        args = [first]
        while self.peek()[:2] == ("punct", "&"):
            self.i += 1
            args.append(self.atomexp())
        return args[0] if len(args) == 1 else And(tuple(args))

    def atomexp(self) -> Formula:
        kind, tok, _ = self.peek()
        if kind == "punct" and tok == "!":
            self.i += 1
            return Not(self.atomexp())
        if kind == "punct" and tok == "(":
            self.i += 1
            phi = self.formula()
            self.expect(")")
            return phi
        if kind == "ident":
            if tok == "B" and self.peek(1)[:2] == ("punct", "["):
                return self.believes()
            self.i += 1
            return Top() if tok == TOP else Prop(tok)
        self.fail(["'!'", "'('", "identifier", "'B['", "'true'"])

    def believes(self) -> Formula:
        self.i += 1
        self.expect("[")
        player = self.ident() if self.peek()[0] == "ident" else str(self.integer())
        self.expect(",")
        event = self.ident()
        self.expect(",")
        offset = self.peek()[2]
        num = self.integer()
        den = 1
        if self.peek()[:2] == ("punct", "/"):
            self.i += 1
            den = self.integer(positive=True)
        q = Fraction(num, den)
        if not 0 <= q <= 1:
            raise ThresholdOutOfRange(f"threshold {q} outside [0, 1] at byte {self._bytes(offset)}")
        self.expect("]")
        self.expect("(")
        arg = self.formula()
        self.expect(")")
        return Believes(player, event, q, arg)


def parse_formula(text: str) -> Formula:
    """Parse ``text``; raises :class:`ParseError` or :class:`ThresholdOutOfRange`."""
    return _Parser(text).parse()


# -- semantics -----------------------------------------------------------------


def evaluate(model: TypeStructure, phi: Formula) -> EventSet:
    """The set of worlds of ``model`` where ``phi`` holds."""
    size = len(model.world)
    if isinstance(phi, Top):
        return EventSet.full(size)
    if isinstance(phi, Prop):
        val = model.valuation
        if val is None or phi.name not in val.props:
            raise UnknownProposition(f"unknown proposition {phi.name!r}")
        return EventSet.from_indices(size, (i for i, w in enumerate(model.world.states) if val(w[0], phi.name)))
    if isinstance(phi, Not):
        return evaluate(model, phi.arg).complement()
    if isinstance(phi, And):
        out = EventSet.full(size)
        for a in phi.args:
            out = out & evaluate(model, a)
        return out
    if isinstance(phi, Believes):
        if phi.player not in model.beliefs:
            raise UnknownPlayer(f"unknown player {phi.player!r}")
        if phi.event not in model.space.conditioning:
            raise UnknownEvent(f"unknown conditioning event {phi.event!r}")
        return p_belief(model, phi.player, phi.event, phi.threshold, evaluate(model, phi.arg))
    raise TypeError(f"not a formula: {phi!r}")


@dataclass(frozen=True)
class CheckResult:
    status: str
    extension: EventSet
    witness: tuple | None = None


def check(model: TypeStructure, phi: Formula) -> CheckResult:
    """Classify ``phi`` as ``valid``, ``satisfiable`` or ``unsatisfiable`` in ``model``.

    A satisfiable-but-not-valid formula comes with its first satisfying world.
    """
    ext = evaluate(model, phi)
    if ext.is_full():
        return CheckResult("valid", ext)
    if not ext:
        return CheckResult("unsatisfiable", ext)
    first = next(iter(ext))
    return CheckResult("satisfiable", ext, model.world.states[first])
