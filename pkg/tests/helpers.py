"""Random generators and brute-force oracles shared by the test modules.

The oracles deliberately avoid the library's own machinery (EventSet
arithmetic, p_belief, world_image, partition refinement) and work on plain
dicts and tuples instead.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from cpstypes import Cps, Measure, TypeStructure, Valuation, new_space, product_space
from cpstypes.logic import And, Believes, Not, Prop, Top

THRESHOLDS = [Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(1)]


# -- generators -----------------------------------------------------------------


def random_weights(rng: random.Random, n: int, zero_chance: float = 0.0) -> list[Fraction]:
    """``n`` non-negative rationals summing to 1, at least one positive."""
    raw = [0 if rng.random() < zero_chance else rng.randint(1, 4) for _ in range(n)]
    if not any(raw):
        raw[rng.randrange(n)] = 1
    total = sum(raw)
    return [Fraction(r, total) for r in raw]


def random_space(rng: random.Random, max_states: int = 6, max_events: int = 4, with_full: bool | None = None):
    n = rng.randint(1, max_states)
    states = [f"s{i + 1}" for i in range(n)]
    k = rng.randint(1, max_events)
    if with_full is None:
        with_full = rng.random() < 0.6
    events = {}
    if with_full:
        events["All"] = list(states)
    while len(events) < k:
        subset = [s for s in states if rng.random() < 0.5] or [rng.choice(states)]
        events[f"E{len(events)}"] = subset
    return new_space(states, events)


def lps_levels(rng: random.Random, n: int, must_hit: list[set], zero_chance: float = 0.3) -> list[list[Fraction]]:
    """A lexicographic sequence of measures over ``range(n)``.

    Each set in ``must_hit`` gets positive mass at some level, so every
    conditioning on those sets is defined.
    """
    support = {i for i in range(n) if rng.random() >= zero_chance}
    for target in must_hit:
        if not support & target:
            support.add(rng.choice(sorted(target)))
    order = sorted(support)
    rng.shuffle(order)
    n_levels = rng.randint(1, min(3, len(order)))
    cuts = sorted(rng.sample(range(1, len(order)), n_levels - 1)) if n_levels > 1 else []
    levels = []
    for lo, hi in zip([0] + cuts, cuts + [len(order)]):
        masses = [Fraction(0)] * n
        chunk = order[lo:hi]
        for i, w in zip(chunk, random_weights(rng, len(chunk))):
            masses[i] = w
        levels.append(masses)
    return levels


def condition_levels(levels: list[list[Fraction]], event: set) -> list[Fraction]:
    for masses in levels:
        mass = sum(masses[i] for i in event)
        if mass > 0:
            return [m / mass if i in event else Fraction(0) for i, m in enumerate(masses)]
    raise AssertionError("no level charges the event")


def random_valid_cps(rng: random.Random, space) -> Cps:
    events = {b: set(e) for b, e in space.conditioning.items()}
    levels = lps_levels(rng, len(space), list(events.values()))
    return Cps(space, {b: Measure(space, condition_levels(levels, e)) for b, e in events.items()})


def random_family(rng: random.Random, space) -> Cps:
    """A measure family that is valid about half the time."""
    cps = random_valid_cps(rng, space)
    kind = rng.random()
    if kind < 0.45:
        return cps
    per_event = {b: list(mu.masses) for b, mu in cps.per_event.items()}
    names = list(per_event)
    b = rng.choice(names)
    n = len(space)
    if kind < 0.65:
        # move mass between two states of one measure
        i, j = rng.randrange(n), rng.randrange(n)
        delta = Fraction(rng.randint(1, 3), rng.randint(2, 6))
        per_event[b][i] += delta
        per_event[b][j] -= delta
        if rng.random() < 0.5:
            per_event[b] = [max(m, Fraction(0)) for m in per_event[b]]
    elif kind < 0.8:
        per_event[b] = random_weights(rng, n, zero_chance=0.4)
    elif kind < 0.9:
        per_event = {c: random_weights(rng, n, zero_chance=0.4) for c in names}
    else:
        i = rng.randrange(n)
        per_event[b][i] *= rng.choice([Fraction(1, 2), Fraction(2), Fraction(-1)])
    return Cps(space, {c: Measure(space, m) for c, m in per_event.items()})


def _partition_labels(rng, labels, n_classes):
    labels = list(labels)
    assign = {t: i for i, t in enumerate(labels[:n_classes])}
    for t in labels[n_classes:]:
        assign[t] = rng.randrange(n_classes)
    classes = [[t for t in labels if assign[t] == c] for c in range(n_classes)]
    return assign, classes


def random_structure(
    rng: random.Random,
    max_players: int = 3,
    max_types: int = 4,
    max_events: int = 3,
    max_states: int = 3,
    max_worlds: int | None = None,
    players: list[str] | None = None,
    space=None,
    props: list[str] | None = None,
    redundancy: float = 0.6,
) -> TypeStructure:
    """A Harsanyi structure whose types often repeat each other's hierarchies.

    Types are grouped into classes.  Each class holds a lexicographic belief
    over ``S x (other players' classes)``; every member refines it by
    splitting class-world masses across member worlds, so the class
    partition is a bisimulation and the fixpoint may be coarser still.
    """
    if space is None:
        space = random_space(rng, max_states, max_events)
    if players is None:
        players = [str(i + 1) for i in range(rng.randint(1, max_players))]
    while True:
        sizes = {j: rng.randint(1, max_types) for j in players}
        n_worlds = len(space)
        for k in sizes.values():
            n_worlds *= k
        if max_worlds is None or n_worlds <= max_worlds:
            break
    types = {j: [f"t{j}_{i + 1}" for i in range(sizes[j])] for j in players}
    classes = {}
    members = {}
    for j in players:
        n_classes = sizes[j] if rng.random() > redundancy else rng.randint(1, sizes[j])
        classes[j], members[j] = _partition_labels(rng, types[j], n_classes)

    events = {b: set(space.labels(e)) for b, e in space.conditioning.items()}
    masses = {}
    for j in players:
        others = [i for i in players if i != j]
        class_worlds = list(itertools.product(space.states, *[range(len(members[i])) for i in others]))
        hits = [{k for k, cw in enumerate(class_worlds) if cw[0] in e} for e in events.values()]
        row = {}
        for c, group in enumerate(members[j]):
            levels = lps_levels(rng, len(class_worlds), hits)
            for t in group:
                # split each class-world's mass over its member worlds, independently per type and level
                member_levels = []
                for lvl in levels:
                    acc = {}
                    for cw, mass in zip(class_worlds, lvl):
                        if not mass:
                            continue
                        blocks = [members[i][cw[k + 1]] for k, i in enumerate(others)]
                        fine = list(itertools.product(*blocks))
                        for tail, share in zip(fine, random_weights(rng, len(fine), zero_chance=0.3)):
                            if share:
                                acc[(cw[0],) + tail] = acc.get((cw[0],) + tail, 0) + mass * share
                    member_levels.append(acc)
                per_event = {}
                for b, e in events.items():
                    for acc in member_levels:
                        total = sum(m for w, m in acc.items() if w[0] in e)
                        if total:
                            per_event[b] = {
                                _insert(w, players.index(j) + 1, t): m / total for w, m in acc.items() if w[0] in e
                            }
                            break
                row[t] = per_event
        masses[j] = row
    valuation = None
    if props:
        valuation = Valuation(props, {s: [p for p in props if rng.random() < 0.5] for s in space.states})
    return TypeStructure.from_masses(space, players, types, masses, valuation)


def _insert(world_without_j: tuple, pos: int, t) -> tuple:
    return world_without_j[:pos] + (t,) + world_without_j[pos:]


def relabel(ts: TypeStructure, rng: random.Random, target_types=None):
    """Any map of each player's types into ``target_types`` (default: a shuffle of its own)."""
    out = {}
    for j in ts.players:
        codomain = list(target_types[j]) if target_types else list(ts.types[j])
        out[j] = {t: rng.choice(codomain) for t in ts.types[j]}
    return out


def random_formula(rng: random.Random, depth: int, props, players, events, budget: int = 3) -> object:
    """A random formula whose belief operators nest at most ``depth`` deep.

    ``budget`` bounds the boolean structure between belief operators.
    """
    choice = rng.random()
    if budget == 0 or choice < 0.25:
        if depth > 0 and rng.random() < 0.5:
            return _random_belief(rng, depth, props, players, events)
        return Top() if rng.random() < 0.1 else Prop(rng.choice(props))
    if choice < 0.45:
        return Not(random_formula(rng, depth, props, players, events, budget - 1))
    if choice < 0.7 or depth == 0:
        n = rng.randint(2, 3)
        return And(tuple(random_formula(rng, depth, props, players, events, budget - 1) for _ in range(n)))
    return _random_belief(rng, depth, props, players, events)


def _random_belief(rng, depth, props, players, events):
    return Believes(
        rng.choice(players),
        rng.choice(events),
        rng.choice(THRESHOLDS),
        random_formula(rng, depth - 1, props, players, events),
    )


# -- oracles --------------------------------------------------------------------


def subsets(items):
    items = list(items)
    return itertools.chain.from_iterable(itertools.combinations(items, r) for r in range(len(items) + 1))


def brute_force_cps_ok(space, measures: dict) -> bool:
    """A1-A3 checked over every ``A <= B <= C`` with plain dictionaries."""
    states = list(space.states)
    events = {b: frozenset(space.labels(e)) for b, e in space.conditioning.items()}
    mu = {b: dict(zip(states, measures[b])) for b in events}

    def prob(b, subset):
        return sum((mu[b][s] for s in subset), Fraction(0))

    for b, e in events.items():
        if any(m < 0 for m in mu[b].values()) or prob(b, states) != 1:
            return False
        if prob(b, e) != 1:
            return False
    for b, eb in events.items():
        for c, ec in events.items():
            if not eb <= ec:
                continue
            for a in subsets(sorted(eb)):
                if prob(b, a) * prob(c, eb) != prob(c, a):
                    return False
    return True


def brute_force_morphism_ok(ts: TypeStructure, ts2: TypeStructure, maps: dict) -> bool:
    """The commuting square tested on every event ``E`` of the target world space."""
    order = ts.players

    def image(w):
        return (w[0],) + tuple(maps[j][w[k + 1]] for k, j in enumerate(order))

    targets = list(ts2.world.states)
    for j in ts.players:
        for t in ts.types[j]:
            for b in ts.space.conditioning:
                src = dict(zip(ts.world.states, ts.beliefs[j][t][b].masses))
                dst = dict(zip(targets, ts2.beliefs[j][maps[j][t]][b].masses))
                for e in subsets(targets):
                    e = set(e)
                    lhs = sum((dst[w] for w in e), Fraction(0))
                    rhs = sum((m for w, m in src.items() if image(w) in e), Fraction(0))
                    if lhs != rhs:
                        return False
    return True


def oracle_holds(ts: TypeStructure, phi, world: tuple, memo: dict) -> bool:
    """Truth of ``phi`` at ``world`` by direct recursion over the definitions."""
    key = (id(phi), world)
    if key in memo:
        return memo[key]
    if isinstance(phi, Top):
        out = True
    elif isinstance(phi, Prop):
        out = phi.name in ts.valuation.true_props(world[0])
    elif isinstance(phi, Not):
        out = not oracle_holds(ts, phi.arg, world, memo)
    elif isinstance(phi, And):
        out = all(oracle_holds(ts, a, world, memo) for a in phi.args)
    else:
        t = world[ts.players.index(phi.player) + 1]
        mu = ts.beliefs[phi.player][t][phi.event]
        mass = sum(
            (m for w, m in zip(ts.world.states, mu.masses) if m and oracle_holds(ts, phi.arg, w, memo)),
            Fraction(0),
        )
        out = mass >= phi.threshold
    memo[key] = out
    return out


def oracle_extension(ts: TypeStructure, phi) -> set:
    memo: dict = {}
    return {w for w in ts.world.states if oracle_holds(ts, phi, w, memo)}


def naive_descriptions(ts: TypeStructure, depth: int) -> dict:
    """Depth-``depth`` descriptions as plain nested tuples (no interning)."""
    desc = {j: {t: () for t in ts.types[j]} for j in ts.players}
    for _ in range(depth):
        nxt = {}
        for j in ts.players:
            nxt[j] = {}
            for t in ts.types[j]:
                level = []
                for b in ts.space.conditioning:
                    acc = {}
                    for w, m in zip(ts.world.states, ts.beliefs[j][t][b].masses):
                        if m:
                            key = (w[0],) + tuple(desc[i][w[k + 1]] for k, i in enumerate(ts.players))
                            acc[key] = acc.get(key, 0) + m
                    level.append((b, frozenset(acc.items())))
                nxt[j][t] = (desc[j][t], tuple(level))
        desc = nxt
    return desc


def world_product(space, types, players):
    return product_space(space, [types[j] for j in players])
