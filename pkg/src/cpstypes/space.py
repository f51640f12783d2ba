"""Finite conditional measurable spaces.

A space is an ordered tuple of distinct states together with a named family
of nonempty conditioning events.  The event algebra is always the full power
set, so any subset of states is an event; subsets are carried around as
:class:`EventSet` bitmasks indexed by state position.

Product spaces (nature times one or more type sets) are ordinary spaces whose
states are tuples, enumerated lexicographically in input order, and whose
conditioning events are the cylinders ``B x Y`` over the nature events.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import (
    DuplicateLabel,
    EmptyConditioningEvent,
    EventOutsideSpace,
    InconsistentLiteralSet,
    UnknownProposition,
    UnknownState,
)

TOP = "true"


@dataclass(frozen=True)
class EventSet:
    """A subset of ``range(size)`` stored as an integer bitmask."""

    size: int
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.size:
            raise EventOutsideSpace(f"bitmask {self.bits:#x} exceeds {self.size} states")

    @classmethod
    def from_indices(cls, size: int, indices: Iterable[int]) -> EventSet:
        bits = 0
        for i in indices:
            if not 0 <= i < size:
                raise EventOutsideSpace(f"index {i} outside 0..{size - 1}")
            bits |= 1 << i
        return cls(size, bits)

    @classmethod
    def full(cls, size: int) -> EventSet:
        return cls(size, (1 << size) - 1)

    @classmethod
    def empty(cls, size: int) -> EventSet:
        return cls(size, 0)

    def __contains__(self, index: int) -> bool:
        return 0 <= index < self.size and bool(self.bits >> index & 1)

    def __iter__(self) -> Iterator[int]:
        bits, i = self.bits, 0
        while bits:
            if bits & 1:
                yield i
            bits >>= 1
            i += 1

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __bool__(self) -> bool:
        return self.bits != 0

    def _check(self, other: EventSet):
        if not isinstance(other, EventSet) or other.size != self.size:
            raise EventOutsideSpace("event sets over different spaces")

    def __and__(self, other: EventSet) -> EventSet:
        self._check(other)
        return EventSet(self.size, self.bits & other.bits)

    def __or__(self, other: EventSet) -> EventSet:
        self._check(other)
        return EventSet(self.size, self.bits | other.bits)

    def __sub__(self, other: EventSet) -> EventSet:
        self._check(other)
        return EventSet(self.size, self.bits & ~other.bits)

    def complement(self) -> EventSet:
        return EventSet(self.size, ~self.bits & ((1 << self.size) - 1))

    def issubset(self, other: EventSet) -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    __le__ = issubset

    def is_full(self) -> bool:
        return self.bits == (1 << self.size) - 1


class FiniteConditionalSpace:
    """Ordered finite state set with named conditioning events.

    ``components`` is ``None`` for a base space and the tuple of coordinate
    label tuples when the states are product tuples.
    """

    __slots__ = ("states", "conditioning", "components", "_index")

    def __init__(
        self,
        states: Sequence[Hashable],
        conditioning: Mapping[str, EventSet] | None = None,
        components: Sequence[Sequence[Hashable]] | None = None,
    ):
        states = tuple(states)
        index = {}
        for i, s in enumerate(states):
            if s in index:
                raise DuplicateLabel(f"duplicate state {s!r}")
            index[s] = i
        cond = {}
        for name, event in (conditioning or {}).items():
            if event.size != len(states):
                raise EventOutsideSpace(f"event {name!r} has the wrong size")
            if not event:
                raise EmptyConditioningEvent(f"conditioning event {name!r} is empty")
            cond[name] = event
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "conditioning", cond)
        object.__setattr__(
            self, "components", None if components is None else tuple(tuple(c) for c in components)
        )
        object.__setattr__(self, "_index", index)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteConditionalSpace is immutable")

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __contains__(self, state) -> bool:
        return state in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteConditionalSpace):
            return NotImplemented
        return (
            self.states == other.states
            and list(self.conditioning.items()) == list(other.conditioning.items())
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.states, tuple(self.conditioning.items())))

    def __repr__(self):
        return f"FiniteConditionalSpace(states={list(self.states)!r}, events={list(self.conditioning)!r})"

    @property
    def event_names(self) -> tuple[str, ...]:
        return tuple(self.conditioning)

    def index(self, state) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise UnknownState(f"unknown state {state!r}") from None

    def event(self, states: Iterable[Hashable]) -> EventSet:
        return EventSet.from_indices(len(self.states), (self.index(s) for s in states))

    def labels(self, event: EventSet) -> list:
        if event.size != len(self.states):
            raise EventOutsideSpace("event does not belong to this space")
        return [self.states[i] for i in event]

    def full(self) -> EventSet:
        return EventSet.full(len(self.states))

    def with_conditioning(self, conditioning: Mapping[str, EventSet]) -> FiniteConditionalSpace:
        return FiniteConditionalSpace(self.states, conditioning, self.components)


def new_space(states: Sequence[Hashable], conditioning: Mapping[str, Iterable[Hashable]]) -> FiniteConditionalSpace:
    """Build and validate a base space from state labels and event subsets."""
    bare = FiniteConditionalSpace(states)
    events = {name: bare.event(subset) for name, subset in conditioning.items()}
    return FiniteConditionalSpace(states, events)


def product_states(space: FiniteConditionalSpace, components) -> list[tuple]:
    return [tuple(p) for p in itertools.product(space.states, *components)]


def lift_conditioning(space: FiniteConditionalSpace, extra_components: Sequence[Sequence[Hashable]]) -> dict[str, EventSet]:
    """Map each conditioning event ``B`` to its cylinder ``B x Y`` over the product.

    Product states are enumerated with the nature coordinate most significant,
    so the cylinder over nature state ``n`` is one contiguous run of indices.
    """
    for comp in extra_components:
        if len(set(comp)) != len(comp):
            raise DuplicateLabel(f"duplicate labels in component {list(comp)!r}")
    stride = 1
    for comp in extra_components:
        stride *= len(comp)
    size = len(space) * stride
    block = (1 << stride) - 1
    lifted = {}
    for name, event in space.conditioning.items():
        bits = 0
        for n in event:
            bits |= block << (n * stride)
        lifted[name] = EventSet(size, bits)
    return lifted


def product_space(space: FiniteConditionalSpace, extra_components: Sequence[Sequence[Hashable]]) -> FiniteConditionalSpace:
    """The product of nature with ``extra_components``, carrying lifted conditioning."""
    components = [tuple(space.states)] + [tuple(c) for c in extra_components]
    lifted = lift_conditioning(space, extra_components)
    return FiniteConditionalSpace(product_states(space, extra_components), lifted, components)


def plain_space(labels: Sequence[Hashable]) -> FiniteConditionalSpace:
    return FiniteConditionalSpace(labels)


def format_state(state) -> str:
    """Render a product state as ``(s1,t1,u1)``; plain labels pass through."""
    if isinstance(state, tuple):
        return "(" + ",".join(str(x) for x in state) + ")"
    return str(state)


# -- propositional spaces -------------------------------------------------


@dataclass(frozen=True)
class Literal:
    prop: str
    positive: bool = True

    def __str__(self):
        return self.prop if self.positive else "!" + self.prop

    @classmethod
    def parse(cls, text: str) -> Literal:
        text = text.strip()
        if text[:1] in ("!", "~", "¬"):
            return cls(text[1:].strip(), False)
        return cls(text, True)


class LiteralSet(frozenset):
    """A nonempty, consistent set of literals."""

    def __new__(cls, literals: Iterable[Literal | str]):
        lits = [lit if isinstance(lit, Literal) else Literal.parse(lit) for lit in literals]
        self = super().__new__(cls, lits)
        if not self:
            raise InconsistentLiteralSet("conditioning literal sets must be nonempty")
        seen = {}
        for lit in self:
            if seen.setdefault(lit.prop, lit.positive) != lit.positive:
                raise InconsistentLiteralSet(f"both {lit.prop} and !{lit.prop} in literal set")
        return self

    def fixed(self) -> dict[str, bool]:
        return {lit.prop: lit.positive for lit in self}

    def name(self, order: Sequence[str]) -> str:
        """Identifier-safe canonical name, literals in proposition order."""
        fixed = self.fixed()
        parts = [p if fixed[p] else "not_" + p for p in order if p in fixed]
        return "_and_".join(parts)


class Valuation:
    """Truth table ``val(s, p)`` over nature states; ``TOP`` holds everywhere."""

    def __init__(self, props: Sequence[str], table: Mapping[Hashable, Iterable[str]]):
        self.props = tuple(props)
        known = set(self.props)
        self.table = {}
        for state, true_props in table.items():
            true_props = frozenset(true_props) - {TOP}
            unknown = true_props - known
            if unknown:
                raise UnknownProposition(f"state {state!r} lists unknown propositions {sorted(unknown)}")
            self.table[state] = true_props

    def __call__(self, state, prop: str) -> int:
        if prop == TOP:
            return 1
        if prop not in self.props:
            raise UnknownProposition(f"unknown proposition {prop!r}")
        try:
            return int(prop in self.table[state])
        except KeyError:
            raise UnknownState(f"no valuation for state {state!r}") from None

    def __eq__(self, other):
        if not isinstance(other, Valuation):
            return NotImplemented
        return set(self.props) == set(other.props) and self.table == other.table

    def true_props(self, state) -> list[str]:
        return [p for p in self.props if p in self.table[state]]


class PropositionalSpace(FiniteConditionalSpace):
    """A space induced from primitive propositions; carries its valuation."""

    __slots__ = ("valuation",)

    def __init__(self, states, conditioning, valuation: Valuation):
        super().__init__(states, conditioning)
        object.__setattr__(self, "valuation", valuation)


def state_label(true_props: Sequence[str]) -> str:
    return "+".join(true_props) if true_props else "-"


def induce_from_propositions(props: Sequence[str], cond_props: Sequence[LiteralSet | Iterable[str]]):
    """Build the space of complete consistent assignments over ``props``.

    States are every truth assignment, labelled by their true propositions in
    input order (``"-"`` when none holds); assignments are enumerated with the
    first proposition most significant and ``True`` before ``False``.  Each
    literal set contributes its full cylinder ``{s : phi <= s}`` as a
    conditioning event.  Returns ``(space, valuation)``.
    """
    props = list(props)
    if len(set(props)) != len(props):
        raise DuplicateLabel("duplicate proposition names")
    if TOP in props:
        raise DuplicateLabel(f"{TOP!r} is reserved for the tautology")
    known = set(props)

    assignments = list(itertools.product((True, False), repeat=len(props)))
    labels = [state_label([p for p, v in zip(props, row) if v]) for row in assignments]
    table = {label: [p for p, v in zip(props, row) if v] for label, row in zip(labels, assignments)}
    size = len(labels)

    events = {}
    for phi in cond_props:
        phi = phi if isinstance(phi, LiteralSet) else LiteralSet(phi)
        for lit in phi:
            if lit.prop not in known:
                raise UnknownProposition(f"unknown proposition {lit.prop!r}")
        fixed = [(props.index(p), v) for p, v in phi.fixed().items()]
        bits = 0
        for i, row in enumerate(assignments):
            if all(row[k] == v for k, v in fixed):
                bits |= 1 << i
        name = phi.name(props)
        if name in events:
            raise DuplicateLabel(f"conditioning literal set {name!r} given twice")
        events[name] = EventSet(size, bits)

    valuation = Valuation(props, table)
    return PropositionalSpace(labels, events, valuation), valuation


def satisfies_conditioning_conditions(event: EventSet, phi: LiteralSet, space: PropositionalSpace) -> bool:
    """Whether ``event`` qualifies as a conditioning event described by ``phi``.

    (i) every state in the event makes every literal of ``phi`` true, and
    (ii) every proposition left free by ``phi`` is true somewhere and false
    somewhere in the event.  The empty event never qualifies.
    """
    if event.size != len(space):
        raise EventOutsideSpace("event does not belong to this space")
    val = space.valuation
    fixed = phi.fixed()
    for p in fixed:
        if p not in val.props:
            raise UnknownProposition(f"unknown proposition {p!r}")
    if not event:
        return False
    seen = {p: set() for p in val.props if p not in fixed}
    for i in event:
        s = space.states[i]
        for p, v in fixed.items():
            if bool(val(s, p)) != v:
                return False
        for p, values in seen.items():
            values.add(bool(val(s, p)))
    return all(len(values) == 2 for values in seen.values())
