"""Depth-k belief hierarchies.

A player's depth-0 description is a single shared point.  Its depth-(k+1)
description extends the depth-k one with, for every conditioning event, the
image of the type's belief under the depth-k description of every world
coordinate.  Nature is described by the state itself at every depth.

Descriptions are hash-consed: two descriptions with the same content are the
same Python object, even when they come from different structures.  That
keeps equality checks constant-time although the unfolded trees grow
exponentially with depth.

:func:`hierarchy_partition` computes the same equivalence independently by
partition refinement over block indices, without building any trees.
"""

from __future__ import annotations

import json
import threading
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable

from .errors import DepthExceeded, MorphismInvalid, NegativeDepth, UnknownPlayer, UnknownState, UnknownType
from .measure import Report, format_rational
from .structure import NATURE, MorphismSpec, TypeStructure, check_morphism

FIXPOINT = "fixpoint"


class Description:
    """Interned depth-k description of a player type.

    ``beliefs`` holds the top level only, as ``((event, frozenset of
    (world, mass)), ...)`` in the space's event order, where each world is
    ``(state, d_1, ..., d_n)`` with depth-(k-1) descriptions.  Lower levels
    are reached through ``prefix``.
    """

    __slots__ = ("depth", "prefix", "beliefs", "__weakref__")

    def __repr__(self):
        return f"<Description depth={self.depth} at {id(self):#x}>"

    def levels(self) -> list[tuple]:
        """Per-level beliefs, level 0 (beliefs about depth-0 worlds) first."""
        out = []
        node = self
        while node.depth > 0:
            out.append(node.beliefs)
            node = node.prefix
        out.reverse()
        return out

    def truncate(self, depth: int) -> Description:
        return truncate(self, depth)


_TABLE: weakref.WeakValueDictionary = weakref.WeakValueDictionary()
_LOCK = threading.Lock()


def _make(depth, prefix, beliefs) -> Description:
    d = Description()
    d.depth = depth
    d.prefix = prefix
    d.beliefs = beliefs
    return d


ROOT = _make(0, None, ())


def _intern(prefix: Description, beliefs: tuple) -> Description:
    key = (prefix, beliefs)
    with _LOCK:
        found = _TABLE.get(key)
        if found is None:
            found = _make(prefix.depth + 1, prefix, beliefs)
            _TABLE[key] = found
        return found


def description_tables(ts: TypeStructure, depth: int) -> list[dict]:
    """``tables[l][player][type]`` is the depth-``l`` description, for ``l <= depth``."""
    if depth < 0:
        raise NegativeDepth(f"depth {depth} < 0")
    tables = [{j: {t: ROOT for t in ts.types[j]} for j in ts.players}]
    coords = list(enumerate(ts.players, start=1))
    worlds = ts.world.states
    for _ in range(depth):
        cur = tables[-1]
        described = [(w[0],) + tuple(cur[j][w[pos]] for pos, j in coords) for w in worlds]
        nxt = {}
        for j in ts.players:
            row = {}
            for t in ts.types[j]:
                beliefs = []
                for b, mu in ts.beliefs[j][t].per_event.items():
                    acc: dict = {}
                    for i, m in mu.support():
                        key = described[i]
                        acc[key] = acc.get(key, 0) + m
                    beliefs.append((b, frozenset((k, m) for k, m in acc.items() if m)))
                row[t] = _intern(cur[j][t], tuple(beliefs))
            nxt[j] = row
        tables.append(nxt)
    return tables


def describe(ts: TypeStructure, player: str, type_label: Hashable, depth: int):
    """Depth-``depth`` description of a type; nature states describe themselves."""
    if depth < 0:
        raise NegativeDepth(f"depth {depth} < 0")
    if player == NATURE:
        if type_label not in ts.space:
            raise UnknownState(f"unknown state {type_label!r}")
        return type_label
    if player not in ts.types:
        raise UnknownPlayer(f"unknown player {player!r}")
    if type_label not in ts.types[player]:
        raise UnknownType(f"unknown type {type_label!r} of player {player!r}")
    return description_tables(ts, depth)[depth][player][type_label]


def truncate(tree, depth: int):
    if depth < 0:
        raise NegativeDepth(f"depth {depth} < 0")
    if not isinstance(tree, Description):
        return tree
    if depth > tree.depth:
        raise DepthExceeded(f"cannot truncate a depth-{tree.depth} description to {depth}")
    while tree.depth > depth:
        tree = tree.prefix
    return tree


# -- partition refinement ----------------------------------------------------


@dataclass(frozen=True)
class PartitionFamily:
    """Blocks of description-equivalent types, numbered by first occurrence."""

    blocks: dict
    nature: tuple
    depth: int
    stable_at: int | None = None
    assignment: dict = field(default=None, repr=False, compare=False)

    def block_of(self, player: str, type_label) -> int:
        return self.assignment[player][type_label]

    def is_discrete(self, player: str | None = None) -> bool:
        players = [player] if player is not None else list(self.blocks)
        return all(all(len(b) == 1 for b in self.blocks[j]) for j in players)

    def same_partition(self, other: PartitionFamily) -> bool:
        return self.blocks == other.blocks

    def to_dict(self) -> dict:
        return {j: [[str(t) for t in block] for block in blocks] for j, blocks in self.blocks.items()}


def _refine(ts: TypeStructure, assign: dict) -> dict:
    coords = list(enumerate(ts.players, start=1))
    keys = [(w[0],) + tuple(assign[j][w[pos]] for pos, j in coords) for w in ts.world.states]
    new = {}
    for j in ts.players:
        signatures: dict = {}
        row = {}
        for t in ts.types[j]:
            parts = [assign[j][t]]
            for mu in ts.beliefs[j][t].per_event.values():
                acc: dict = {}
                for i, m in mu.support():
                    acc[keys[i]] = acc.get(keys[i], 0) + m
                parts.append(frozenset((k, m) for k, m in acc.items() if m))
            row[t] = signatures.setdefault(tuple(parts), len(signatures))
        new[j] = row
    return new


def _family(ts, assign, depth, stable_at=None) -> PartitionFamily:
    blocks = {}
    for j in ts.players:
        grouped: dict = {}
        for t in ts.types[j]:
            grouped.setdefault(assign[j][t], []).append(t)
        blocks[j] = tuple(tuple(grouped[i]) for i in sorted(grouped))
    nature = tuple((s,) for s in ts.space.states)
    return PartitionFamily(blocks, nature, depth, stable_at, assign)


def hierarchy_partition(ts: TypeStructure, depth=FIXPOINT) -> PartitionFamily:
    """Group types whose depth-``depth`` descriptions coincide.

    With ``FIXPOINT``, refine until a round splits nothing; ``stable_at`` is
    the first depth ``l`` whose partition equals the depth-``l+1`` one.  Each
    productive round adds a block, so this happens within
    ``sum_j (|T_j| - 1)`` rounds.
    """
    assign = {j: {t: 0 for t in ts.types[j]} for j in ts.players}
    if depth != FIXPOINT:
        if depth < 0:
            raise NegativeDepth(f"depth {depth} < 0")
        for _ in range(depth):
            assign = _refine(ts, assign)
        return _family(ts, assign, depth)
    bound = sum(len(ts.types[j]) - 1 for j in ts.players)
    for level in range(bound + 1):
        nxt = _refine(ts, assign)
        if nxt == assign:
            return _family(ts, assign, level, level)
        assign = nxt
    raise AssertionError("partition refinement failed to stabilise within its bound")


def check_morphism_preserves_descriptions(ts: TypeStructure, ts2: TypeStructure, f: MorphismSpec, depth: int) -> Report:
    """Compare ``describe(ts2, j, f_j(t), l)`` with ``describe(ts, j, t, l)`` for ``l <= depth``."""
    if not check_morphism(ts, ts2, f).ok:
        raise MorphismInvalid("map is not a type morphism")
    left = description_tables(ts, depth)
    right = description_tables(ts2, depth)
    report = Report()
    for level in range(depth + 1):
        for j in ts.players:
            for t in ts.types[j]:
                u = f.type_map(j, t)
                if left[level][j][t] is not right[level][j][u]:
                    report.add("description", "descriptions differ", depth=level, player=j, type=str(t), image=str(u))
    return report


# -- export ------------------------------------------------------------------


def tree_to_json(tree) -> dict | str:
    """Nested JSON form of a description.

    ``levels[l]`` maps each event to the image measure over depth-``l``
    worlds, listed as ``{"world": [state, d_1, ...], "mass": "p/q"}``
    entries sorted by their canonical JSON text.
    """
    if not isinstance(tree, Description):
        return str(tree)
    memo: dict = {}
    return _node_json(tree, memo)[0]


def _node_json(d: Description, memo: dict):
    cached = memo.get(id(d))
    if cached is not None:
        return cached
    levels = []
    for beliefs in d.levels():
        level = {}
        for b, items in beliefs:
            entries = []
            for world, mass in items:
                parts = [str(world[0])]
                keys = [json.dumps(str(world[0]))]
                for sub in world[1:]:
                    obj, text = _node_json(sub, memo)
                    parts.append(obj)
                    keys.append(text)
                entries.append(("[" + ",".join(keys) + "]", {"world": parts, "mass": format_rational(Fraction(mass))}))
            entries.sort(key=lambda e: e[0])
            level[b] = [e[1] for e in entries]
        levels.append(level)
    obj = {"depth": d.depth, "levels": levels}
    result = (obj, json.dumps(obj, sort_keys=True, separators=(",", ":")))
    memo[id(d)] = result
    return result
