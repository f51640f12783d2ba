"""Redundancy, quotients and finite terminal approximations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import NegativeDepth, SpaceMismatch, WellDefinednessFailure
from .hierarchy import FIXPOINT, Description, description_tables, hierarchy_partition
from .measure import Cps, Measure
from .space import product_space
from .structure import MorphismSpec, TypeStructure


def is_non_redundant(ts: TypeStructure):
    """``(True, None)`` if descriptions separate every player's types.

    Otherwise ``(False, (player, t, u))`` for the first two distinct types
    that share a fixpoint block.
    """
    partition = hierarchy_partition(ts, FIXPOINT)
    for j in ts.players:
        for block in partition.blocks[j]:
            if len(block) > 1:
                return False, (j, block[0], block[1])
    return True, None


def block_name(player: str, index: int) -> str:
    return f"{player}.b{index}"


def quotient(ts: TypeStructure, verify: bool = True):
    """Merge description-equivalent types.

    Returns ``(quotient_structure, map)`` where ``map`` sends each type to its
    block.  A block's belief is the image of its first member's belief under
    the block map; with ``verify`` every other member is pushed forward too
    and must agree.
    """
    partition = hierarchy_partition(ts, FIXPOINT)
    maps = {
        j: {t: block_name(j, partition.block_of(j, t)) for t in ts.types[j]}
        for j in ts.players
    }
    f = MorphismSpec(maps)
    q_types = {j: [block_name(j, i) for i in range(len(partition.blocks[j]))] for j in ts.players}

    world = product_space(ts.space, [q_types[j] for j in ts.players])
    apply = f.world_map(ts.players)
    image = [world.index(apply(w)) for w in ts.world.states]
    size = len(world)

    beliefs = {}
    for j in ts.players:
        row = {}
        for i, block in enumerate(partition.blocks[j]):
            rep = ts.beliefs[j][block[0]]
            per_event = {b: Measure(world, _push(mu, image, size)) for b, mu in rep.per_event.items()}
            if verify:
                for other in block[1:]:
                    for b, mu in ts.beliefs[j][other].per_event.items():
                        if _push(mu, image, size) != list(per_event[b].masses):
                            raise WellDefinednessFailure(
                                f"{j}:{other} and {j}:{block[0]} disagree on blocks under {b!r}"
                            )
            row[block_name(j, i)] = Cps(world, per_event)
        beliefs[j] = row
    q = TypeStructure(ts.space, ts.players, q_types, beliefs, ts.valuation)
    return q, f


def _push(mu: Measure, image, size):
    masses = [0] * size
    for i, m in mu.support():
        masses[image[i]] += m
    return masses


@dataclass(frozen=True)
class TerminalEntry:
    """One depth-k description and its top-level beliefs, per event."""

    description: Description
    beliefs: tuple


def terminal_approximation(structures: Sequence[TypeStructure], depth: int) -> dict:
    """Distinct depth-``depth`` descriptions realised in ``structures``, per player.

    Entries are ordered by first occurrence (structure order, then type
    order).  Each carries the description's top level: the image of the
    type's beliefs over depth-``depth - 1`` worlds, which any two types with
    the same description share.
    """
    if depth < 1:
        raise NegativeDepth(f"terminal approximation needs depth >= 1, got {depth}")
    if not structures:
        return {}
    first = structures[0]
    for ts in structures[1:]:
        if ts.space != first.space or ts.players != first.players:
            raise SpaceMismatch("structures must share the conditional space and players")
    out = {j: [] for j in first.players}
    seen = {j: set() for j in first.players}
    for ts in structures:
        table = description_tables(ts, depth)[depth]
        for j in ts.players:
            for t in ts.types[j]:
                d = table[j][t]
                if id(d) in seen[j]:
                    continue
                seen[j].add(id(d))
                out[j].append(TerminalEntry(d, d.beliefs))
    return out
