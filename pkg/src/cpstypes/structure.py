"""Finite type structures over a conditional space.

A structure fixes nature's space ``S``, an ordered list of players, a type
set per player and, for every type, a CPS over the world space
``T = S x T_1 x ... x T_n`` whose conditioning events are the cylinders over
nature's events.  Player ``"0"`` is reserved for nature.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from .errors import (
    DuplicateLabel,
    NatureCoordinateMoved,
    PartialMap,
    ProbabilityOutOfRange,
    SpaceMismatch,
    UnknownEvent,
    UnknownPlayer,
    UnknownState,
    UnknownType,
)
from .measure import ZERO, Cps, Measure, Report, dirac, marginal, project, rational, validate_cps
from .space import EventSet, FiniteConditionalSpace, PropositionalSpace, Valuation, format_state, product_space

NATURE = "0"


class TypeStructure:
    """Nature, players, type sets, belief functions and an optional valuation.

    Construction checks shape only (keys, domains, event names).  The CPS
    axioms and the own-type Dirac condition are checked by
    :func:`validate_structure`.
    """

    def __init__(
        self,
        space: FiniteConditionalSpace,
        players: Sequence[str],
        types: Mapping[str, Sequence[Hashable]],
        beliefs: Mapping[str, Mapping[Hashable, Cps]],
        valuation: Valuation | None = None,
    ):
        players = tuple(players)
        if len(set(players)) != len(players):
            raise DuplicateLabel("duplicate player ids")
        if NATURE in players:
            raise DuplicateLabel(f"player id {NATURE!r} is reserved for nature")
        for j in types:
            if j not in players:
                raise UnknownPlayer(f"types given for unknown player {j!r}")
        for j in beliefs:
            if j not in players:
                raise UnknownPlayer(f"beliefs given for unknown player {j!r}")
        self.space = space
        self.players = players
        self.types = {}
        for j in players:
            if j not in types:
                raise UnknownPlayer(f"no types for player {j!r}")
            labels = tuple(types[j])
            if not labels:
                raise UnknownType(f"player {j!r} has no types")
            if len(set(labels)) != len(labels):
                raise DuplicateLabel(f"duplicate types for player {j!r}")
            self.types[j] = labels
        self.world = product_space(space, [self.types[j] for j in players])
        self.beliefs = {}
        for j in players:
            given = beliefs.get(j, {})
            extra = [t for t in given if t not in self.types[j]]
            if extra:
                raise UnknownType(f"beliefs for unknown types {extra} of player {j!r}")
            row = {}
            for t in self.types[j]:
                if t not in given:
                    raise UnknownType(f"no beliefs for type {t!r} of player {j!r}")
                cps = given[t]
                if cps.space.states != self.world.states or list(cps.space.conditioning) != list(space.conditioning):
                    raise SpaceMismatch(f"beliefs of {j}:{t} are not over the world space")
                row[t] = cps
            self.beliefs[j] = row
        if valuation is None and isinstance(space, PropositionalSpace):
            valuation = space.valuation
        if valuation is not None:
            for s in space.states:
                if s not in valuation.table:
                    raise UnknownState(f"valuation has no entry for state {s!r}")
        self.valuation = valuation
        self._fibers = self._compute_fibers()

    @classmethod
    def from_masses(cls, space, players, types, masses, valuation=None) -> TypeStructure:
        """Build from ``{player: {type: {event: {world_tuple: mass}}}}``."""
        players = tuple(players)
        world = product_space(space, [tuple(types[j]) for j in players])
        beliefs = {
            j: {t: Cps.from_mappings(world, per_event) for t, per_event in row.items()}
            for j, row in masses.items()
        }
        return cls(space, players, types, beliefs, valuation)

    def _compute_fibers(self):
        fibers = {}
        for pos, j in enumerate(self.players, start=1):
            bits = {t: 0 for t in self.types[j]}
            for i, w in enumerate(self.world.states):
                bits[w[pos]] |= 1 << i
            fibers[j] = {t: EventSet(len(self.world), b) for t, b in bits.items()}
        return fibers

    def __repr__(self):
        sizes = ", ".join(f"{j}:{len(self.types[j])}" for j in self.players)
        return f"TypeStructure(|S|={len(self.space)}, types={{{sizes}}})"

    def position(self, player: str) -> int:
        """Coordinate of ``player`` in a world tuple (nature is 0)."""
        if player == NATURE:
            return 0
        try:
            return self.players.index(player) + 1
        except ValueError:
            raise UnknownPlayer(f"unknown player {player!r}") from None

    def type_labels(self, player: str) -> tuple:
        if player == NATURE:
            return self.space.states
        self.position(player)
        return self.types[player]

    def belief(self, player: str, type_label, event: str) -> Measure:
        if player not in self.beliefs:
            raise UnknownPlayer(f"unknown player {player!r}")
        if type_label not in self.beliefs[player]:
            raise UnknownType(f"unknown type {type_label!r} of player {player!r}")
        if event not in self.space.conditioning:
            raise UnknownEvent(f"unknown conditioning event {event!r}")
        return self.beliefs[player][type_label][event]

    def fiber(self, player: str, type_label) -> EventSet:
        """All worlds in which ``player`` has type ``type_label``."""
        self.position(player)
        try:
            return self._fibers[player][type_label]
        except KeyError:
            raise UnknownType(f"unknown type {type_label!r} of player {player!r}") from None


def validate_structure(ts: TypeStructure, harsanyi: bool = True) -> Report:
    """CPS violations per ``(player, type)`` plus own-type Dirac violations."""
    report = Report()
    for pos, j in enumerate(ts.players, start=1):
        for t in ts.types[j]:
            cps = ts.beliefs[j][t]
            for v in validate_cps(cps).violations:
                report.violations.append(v.with_context(("player", j), ("type", str(t))))
            if not harsanyi:
                continue
            own = dirac(ts.types[j], t)
            for b, mu in cps.per_event.items():
                marg = marginal(mu, pos)
                if marg != own:
                    shown = ", ".join(f"{u}: {m}" for u, m in marg.to_dict().items())
                    report.add(
                        "harsanyi",
                        f"own-type marginal is {{{shown}}}, not Dirac at {t}",
                        player=j,
                        type=str(t),
                        event=b,
                    )
    return report


def p_belief(ts: TypeStructure, player: str, event: str, p, E: EventSet) -> EventSet:
    """Worlds where ``player`` assigns probability at least ``p`` to ``E`` given ``event``.

    The result is the union of the fibers of all qualifying types.
    """
    p = rational(p)
    if not 0 <= p <= 1:
        raise ProbabilityOutOfRange(f"threshold {p} outside [0, 1]")
    if player not in ts.beliefs:
        raise UnknownPlayer(f"unknown player {player!r}")
    if event not in ts.space.conditioning:
        raise UnknownEvent(f"unknown conditioning event {event!r}")
    if E.size != len(ts.world):
        raise SpaceMismatch("event is not over the world space")
    bits = 0
    for t, cps in ts.beliefs[player].items():
        if cps[event].prob(E) >= p:
            bits |= ts.fiber(player, t).bits
    return EventSet(len(ts.world), bits)


def opponents_space(ts: TypeStructure, player: str) -> FiniteConditionalSpace:
    """``S x prod_{i != j} T_i`` with lifted conditioning."""
    others = [ts.types[i] for i in ts.players if i != player]
    return product_space(ts.space, others)


def beta(ts: TypeStructure, player: str) -> dict:
    """Beliefs about nature and the other players: the marginal off own type."""
    pos = ts.position(player)
    if player == NATURE:
        raise UnknownPlayer("nature has no beliefs")
    target = opponents_space(ts, player)
    keep = [c for c in range(len(ts.players) + 1) if c != pos]
    out = {}
    for t, cps in ts.beliefs[player].items():
        per_event = {}
        for b, mu in cps.per_event.items():
            marg = project(mu, keep) if len(keep) > 1 else marginal(mu, 0)
            per_event[b] = Measure(target, marg.masses)
        out[t] = Cps(target, per_event)
    return out


# -- morphisms -------------------------------------------------------------


class MorphismSpec:
    """Per-player type maps; nature is always mapped by the identity."""

    def __init__(self, maps: Mapping[str, Mapping], nature: Mapping | None = None):
        if nature is not None:
            for s, image in nature.items():
                if s != image:
                    raise NatureCoordinateMoved(f"nature map sends {s!r} to {image!r}")
        self.maps = {j: dict(m) for j, m in maps.items()}

    @classmethod
    def identity(cls, ts: TypeStructure) -> MorphismSpec:
        return cls({j: {t: t for t in ts.types[j]} for j in ts.players})

    def __repr__(self):
        return f"MorphismSpec({self.maps!r})"

    def __eq__(self, other):
        return isinstance(other, MorphismSpec) and self.maps == other.maps

    def type_map(self, player: str, type_label):
        try:
            return self.maps[player][type_label]
        except KeyError:
            raise PartialMap(f"type map of player {player!r} undefined at {type_label!r}") from None

    def world_map(self, players: Sequence[str]):
        """The induced map on world tuples ordered as ``(nature, *players)``."""
        maps = [self.maps[j] for j in players]

        def apply(world: tuple) -> tuple:
            return (world[0],) + tuple(m[t] for m, t in zip(maps, world[1:]))

        return apply

    def inverse(self) -> MorphismSpec:
        inv = {}
        for j, m in self.maps.items():
            back = {}
            for t, image in m.items():
                if image in back:
                    raise PartialMap(f"map of player {j!r} is not injective")
                back[image] = t
            inv[j] = back
        return MorphismSpec(inv)

    def to_dict(self) -> dict:
        return {j: {str(t): str(u) for t, u in m.items()} for j, m in self.maps.items()}


def _check_compatible(ts: TypeStructure, ts2: TypeStructure, f: MorphismSpec):
    if ts.space != ts2.space:
        raise SpaceMismatch("structures live on different conditional spaces")
    if ts.players != ts2.players:
        raise SpaceMismatch("structures have different players")
    for j in ts.players:
        if j not in f.maps:
            raise PartialMap(f"no type map for player {j!r}")
        targets = set(ts2.types[j])
        for t in ts.types[j]:
            image = f.type_map(j, t)
            if image not in targets:
                raise PartialMap(f"{j}:{t} maps to {image!r}, not a type of the target")


def world_image(ts: TypeStructure, ts2: TypeStructure, f: MorphismSpec) -> list[int]:
    """Target world index of every source world under the induced map."""
    _check_compatible(ts, ts2, f)
    apply = f.world_map(ts.players)
    return [ts2.world.index(apply(w)) for w in ts.world.states]


def _push(mu: Measure, image: list[int], size: int) -> list[Fraction]:
    masses = [ZERO] * size
    for i, m in mu.support():
        masses[image[i]] += m
    return masses


def check_morphism(ts: TypeStructure, ts2: TypeStructure, f: MorphismSpec) -> Report:
    """Check ``m'_{j,B}(f_j(t))({w'}) = m_{j,B}(t)(f^-1({w'}))`` for every singleton.

    Singletons suffice by additivity.  For each failing ``(j, t, B)`` the
    first target world in enumeration order is reported.  When both
    structures carry valuations they must agree on every state.
    """
    image = world_image(ts, ts2, f)
    size = len(ts2.world)
    report = Report()
    for j in ts.players:
        for t in ts.types[j]:
            u = f.type_map(j, t)
            for b, mu in ts.beliefs[j][t].per_event.items():
                pushed = _push(mu, image, size)
                target = ts2.beliefs[j][u][b].masses
                for w in range(size):
                    if pushed[w] != target[w]:
                        report.add(
                            "morphism",
                            f"m'(f(t))(E) = {target[w]} but m(t)(f^-1(E)) = {pushed[w]}",
                            player=j,
                            type=str(t),
                            event=b,
                            E=[format_state(ts2.world.states[w])],
                        )
                        break
    if ts.valuation is not None and ts2.valuation is not None:
        props = sorted(set(ts.valuation.props) | set(ts2.valuation.props))
        for s in ts.space.states:
            for p in props:
                a = ts.valuation(s, p) if p in ts.valuation.props else None
                b = ts2.valuation(s, p) if p in ts2.valuation.props else None
                if a != b:
                    report.add("valuation", f"val({s},{p}) = {a} vs {b}", state=str(s), prop=p)
    return report


def check_isomorphism(ts: TypeStructure, ts2: TypeStructure, f: MorphismSpec):
    """Return ``(True, inverse)`` if ``f`` is a type isomorphism, else ``(False, None)``."""
    _check_compatible(ts, ts2, f)
    for j in ts.players:
        images = [f.type_map(j, t) for t in ts.types[j]]
        if len(set(images)) != len(images) or set(images) != set(ts2.types[j]):
            return False, None
    inv = f.inverse()
    if not check_morphism(ts, ts2, f).ok or not check_morphism(ts2, ts, inv).ok:
        return False, None
    return True, inv
