"""Exact probability measures and conditional probability systems.

All arithmetic uses :class:`fractions.Fraction`; there are no tolerances
anywhere.  A :class:`Measure` is stored densely over its (small) domain.  It
is allowed to hold masses that are not a probability distribution so that
malformed input can be loaded and then reported by :func:`validate_cps`
instead of crashing at parse time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import (
    BadComponent,
    ConditioningMismatch,
    CpsError,
    ExtraEvent,
    MissingEvent,
    NatureCoordinateMoved,
    NotAProductDomain,
    PartialMap,
    SpaceMismatch,
    UnknownState,
)
from .space import EventSet, FiniteConditionalSpace, format_state, plain_space, product_states

ZERO = Fraction(0)
ONE = Fraction(1)


def rational(value) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Accepts ints, Fractions and strings such as ``"1/3"``.  Floats are
    rejected: they would silently smuggle rounding error into exact checks.
    """
    if isinstance(value, bool):
        raise CpsError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise CpsError(f"not a rational: {value!r}") from None
    raise CpsError(f"not an exact rational: {value!r}")


def format_rational(q: Fraction) -> str:
    return str(q)


def _as_domain(domain) -> FiniteConditionalSpace:
    if isinstance(domain, FiniteConditionalSpace):
        return domain
    return plain_space(domain)


class Measure:
    """A finite measure given by point masses, one per domain state."""

    __slots__ = ("domain", "masses", "_support")

    def __init__(self, domain, masses: Sequence):
        domain = _as_domain(domain)
        masses = tuple(rational(m) for m in masses)
        if len(masses) != len(domain):
            raise CpsError(f"{len(masses)} masses for a domain of {len(domain)} states")
        self.domain = domain
        self.masses = masses
        self._support = None

    @classmethod
    def from_mapping(cls, domain, mapping: Mapping[Hashable, object]) -> Measure:
        """Build from ``{state: mass}``; omitted states get mass zero."""
        domain = _as_domain(domain)
        masses = [ZERO] * len(domain)
        for state, mass in mapping.items():
            masses[domain.index(state)] = rational(mass)
        return cls(domain, masses)

    def __getitem__(self, state) -> Fraction:
        return self.masses[self.domain.index(state)]

    def __eq__(self, other):
        if not isinstance(other, Measure):
            return NotImplemented
        return self.domain.states == other.domain.states and self.masses == other.masses

    def __hash__(self):
        return hash(self.masses)

    def __repr__(self):
        body = ", ".join(f"{format_state(s)}: {m}" for s, m in self.items())
        return f"Measure({{{body}}})"

    def support(self) -> list[tuple[int, Fraction]]:
        """Nonzero ``(index, mass)`` pairs in domain order."""
        if self._support is None:
            self._support = [(i, m) for i, m in enumerate(self.masses) if m]
        return self._support

    def items(self):
        states = self.domain.states
        return [(states[i], m) for i, m in self.support()]

    def prob(self, event: EventSet | Iterable[Hashable]) -> Fraction:
        if not isinstance(event, EventSet):
            event = self.domain.event(event)
        elif event.size != len(self.domain):
            raise SpaceMismatch("event and measure live on different domains")
        bits = event.bits
        return sum((m for i, m in self.support() if bits >> i & 1), ZERO)

    def total(self) -> Fraction:
        return sum(self.masses, ZERO)

    def is_probability(self) -> bool:
        return all(m >= 0 for m in self.masses) and self.total() == 1

    def to_dict(self) -> dict[str, str]:
        return {format_state(s): format_rational(m) for s, m in self.items()}


def dirac(domain, state) -> Measure:
    domain = _as_domain(domain)
    masses = [ZERO] * len(domain)
    masses[domain.index(state)] = ONE
    return Measure(domain, masses)


def project(measure: Measure, components: Sequence[int]) -> Measure:
    """Marginal onto several product coordinates, kept in the given order.

    The result's domain is the product of the chosen coordinate label sets
    (itself a product domain, so it can be projected again).
    """
    dom = measure.domain
    if dom.components is None:
        raise NotAProductDomain("measure is not over a product domain")
    for c in components:
        if not 0 <= c < len(dom.components):
            raise BadComponent(f"component {c} outside 0..{len(dom.components) - 1}")
    comps = [dom.components[c] for c in components]
    if len(comps) == 1:
        target = plain_space(comps[0])
        key = lambda state: state[components[0]]  # noqa: E731
    else:
        target = FiniteConditionalSpace(product_states(plain_space(comps[0]), comps[1:]), None, comps)
        key = lambda state: tuple(state[c] for c in components)  # noqa: E731
    masses = [ZERO] * len(target)
    for i, m in measure.support():
        masses[target.index(key(dom.states[i]))] += m
    return Measure(target, masses)


def marginal(measure: Measure, component: int) -> Measure:
    """Marginal on one coordinate (0 is nature, ``j`` the j-th component after it)."""
    return project(measure, [component])


def _image_domain(f, domain):
    seen = {}
    for s in domain.states:
        seen.setdefault(_apply(f, s), None)
    return plain_space(list(seen))


def _apply(f, state):
    try:
        return f[state] if isinstance(f, Mapping) else f(state)
    except KeyError:
        raise PartialMap(f"map undefined at {format_state(state)}") from None


def pushforward(f: Mapping | Callable, mu: Measure, codomain=None) -> Measure:
    """Image measure: ``result(E) = mu(f^-1(E))``.

    ``f`` must be total on the whole domain of ``mu``, not only its support.
    Without ``codomain`` the result lives on the image of ``f`` in
    first-occurrence order.
    """
    dom = mu.domain
    images = [_apply(f, s) for s in dom.states]
    target = _image_domain(f, dom) if codomain is None else _as_domain(codomain)
    masses = [ZERO] * len(target)
    for i, m in mu.support():
        try:
            masses[target.index(images[i])] += m
        except UnknownState:
            raise PartialMap(f"image {format_state(images[i])} outside the codomain") from None
    for image in images:
        if image not in target:
            raise PartialMap(f"image {format_state(image)} outside the codomain")
    return Measure(target, masses)


class Cps:
    """A family of measures indexed by the conditioning events of ``space``.

    Structural agreement (same event names, measures over ``space``) is
    enforced here; the axioms are checked by :func:`validate_cps`.
    """

    __slots__ = ("space", "per_event")

    def __init__(self, space: FiniteConditionalSpace, per_event: Mapping[str, Measure]):
        missing = [b for b in space.conditioning if b not in per_event]
        if missing:
            raise MissingEvent(f"no measure for conditioning event(s) {missing}")
        extra = [b for b in per_event if b not in space.conditioning]
        if extra:
            raise ExtraEvent(f"measure given for unknown event(s) {extra}")
        for name, mu in per_event.items():
            if mu.domain.states != space.states:
                raise SpaceMismatch(f"measure for {name!r} is over a different domain")
        self.space = space
        self.per_event = {b: per_event[b] for b in space.conditioning}

    def __getitem__(self, event_name: str) -> Measure:
        return self.per_event[event_name]

    def __eq__(self, other):
        if not isinstance(other, Cps):
            return NotImplemented
        return self.space.states == other.space.states and self.per_event == other.per_event

    def __hash__(self):
        return hash(tuple(self.per_event.values()))

    def __repr__(self):
        return f"Cps({self.per_event!r})"

    @classmethod
    def from_mappings(cls, space: FiniteConditionalSpace, mappings: Mapping[str, Mapping]) -> Cps:
        return cls(space, {b: Measure.from_mapping(space, m) for b, m in mappings.items()})

    def to_dict(self) -> dict:
        return {b: mu.to_dict() for b, mu in self.per_event.items()}


# -- reports ---------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """One failed check, with enough context to locate it."""

    kind: str
    detail: str
    context: tuple = ()

    def with_context(self, *pairs) -> Violation:
        return Violation(self.kind, self.detail, tuple(pairs) + self.context)

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        out.update((k, v) for k, v in self.context)
        out["detail"] = self.detail
        return out


@dataclass
class Report:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def add(self, kind: str, detail: str, **context):
        self.violations.append(Violation(kind, detail, tuple(context.items())))

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


def validate_cps(cps: Cps) -> Report:
    """Check A1 (``mu(B|B) = 1``), A2 (probability measure) and A3 (chain rule).

    A3 is only checked on singletons ``{a}`` with ``a`` in ``B``, for every
    pair of distinct events ``B <= C``; finite additivity makes that
    equivalent to checking every ``A <= B``.
    """
    report = Report()
    space = cps.space
    states = space.states
    for b, event in space.conditioning.items():
        mu = cps[b]
        negative = [i for i, m in enumerate(mu.masses) if m < 0]
        if negative:
            report.add("A2", f"negative mass {mu.masses[negative[0]]}", event=b, state=format_state(states[negative[0]]))
        total = mu.total()
        if total != 1:
            report.add("A2", f"masses sum to {total}", event=b)
        mass_b = mu.prob(event)
        if mass_b != 1:
            report.add("A1", f"mu(B|B) = {mass_b}", event=b)

    events = list(space.conditioning.items())
    for b, event_b in events:
        mu_b = cps[b]
        for c, event_c in events:
            if b == c or not event_b.issubset(event_c):
                continue
            mu_c = cps[c]
            weight = mu_c.prob(event_b)
            for a in event_b:
                lhs = mu_b.masses[a] * weight
                rhs = mu_c.masses[a]
                if lhs != rhs:
                    report.add(
                        "A3",
                        f"mu(A|B) mu(B|C) = {lhs} but mu(A|C) = {rhs}",
                        A=[format_state(states[a])],
                        B=b,
                        C=c,
                    )
    return report


def pushforward_cps(f: Mapping | Callable, cps: Cps, target: FiniteConditionalSpace) -> Cps:
    """Push every conditional measure of ``cps`` through ``f`` into ``target``.

    Both spaces must be products sharing the nature coordinate and carrying
    the same lifted conditioning events, and ``f`` may not move nature.
    """
    source = cps.space
    if source.components is None or target.components is None:
        raise NotAProductDomain("pushforward_cps needs product spaces on both sides")
    if source.components[0] != target.components[0]:
        raise ConditioningMismatch("source and target have different nature coordinates")
    if list(source.conditioning) != list(target.conditioning):
        raise ConditioningMismatch("source and target carry different conditioning events")
    for name, event in source.conditioning.items():
        src_nature = {source.states[i][0] for i in event}
        tgt_nature = {target.states[i][0] for i in target.conditioning[name]}
        if src_nature != tgt_nature:
            raise ConditioningMismatch(f"event {name!r} differs on the nature coordinate")
    for state in source.states:
        image = _apply(f, state)
        if not isinstance(image, tuple) or image[:1] != state[:1]:
            raise NatureCoordinateMoved(f"{format_state(state)} maps to {format_state(image)}")
    return Cps(target, {b: pushforward(f, mu, target) for b, mu in cps.per_event.items()})
