"""JSON reading and writing for spaces, structures, maps and reports.

Rationals travel as strings (``"1/3"``, ``"0"``, ``"1"``); measures as
``{state: mass}`` objects where omitted states carry zero mass; product
states as ``"(s1,t1,u1)"`` in ``(nature, *players)`` order.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import CpsError, DuplicateLabel, UnknownState
from .measure import Cps, Measure
from .space import (
    FiniteConditionalSpace,
    PropositionalSpace,
    Valuation,
    format_state,
    new_space,
    product_space,
)
from .structure import NATURE, MorphismSpec, TypeStructure


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise DuplicateLabel(f"duplicate JSON key {key!r}")
        out[key] = value
    return out


def loads(text: str) -> Any:
    """``json.loads`` that rejects duplicate object keys."""
    return json.loads(text, object_pairs_hook=_no_duplicates)


def load_file(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _require(data, key, what):
    if not isinstance(data, dict) or key not in data:
        raise CpsError(f"{what}: missing key {key!r}")
    return data[key]


# -- spaces --------------------------------------------------------------------


def space_from_json(data: dict) -> FiniteConditionalSpace:
    states = [str(s) for s in _require(data, "states", "space")]
    conditioning = _require(data, "conditioning", "space")
    return new_space(states, {name: [str(s) for s in subset] for name, subset in conditioning.items()})


def space_to_json(space: FiniteConditionalSpace) -> dict:
    out = {
        "states": [format_state(s) for s in space.states],
        "conditioning": {b: [format_state(s) for s in space.labels(e)] for b, e in space.conditioning.items()},
    }
    if isinstance(space, PropositionalSpace):
        out.update(valuation_to_json(space.valuation))
    return out


def valuation_from_json(data: dict, space: FiniteConditionalSpace) -> Valuation | None:
    table = data.get("valuation")
    if table is None:
        return None
    props = data.get("propositions")
    if props is None:
        props = []
        for true_props in table.values():
            props.extend(p for p in true_props if p not in props)
    for s in table:
        if s not in space:
            raise UnknownState(f"valuation lists unknown state {s!r}")
    # States left out of the table make every proposition false.
    return Valuation(props, {s: table.get(s, []) for s in space.states})


def valuation_to_json(val: Valuation) -> dict:
    return {
        "propositions": list(val.props),
        "valuation": {str(s): val.true_props(s) for s in val.table},
    }


# -- structures ----------------------------------------------------------------


def structure_from_json(data: dict) -> TypeStructure:
    space_data = _require(data, "space", "structure")
    space = space_from_json(space_data)
    players = [str(j) for j in _require(data, "players", "structure")]
    types = {str(j): [str(t) for t in ts] for j, ts in _require(data, "types", "structure").items()}
    if "valuation" in data:
        valuation = valuation_from_json(data, space)
    else:
        valuation = valuation_from_json(space_data, space)

    # Shape problems (unknown players/types) are reported by the constructor;
    # here we only need the world space to resolve product-state keys.
    for j in players:
        if j not in types:
            raise CpsError(f"structure: no types for player {j!r}")
    world = product_space(space, [types[j] for j in players])
    keys = {}
    for w in world.states:
        label = format_state(w)
        if label in keys:
            raise DuplicateLabel(f"product state label {label!r} is ambiguous")
        keys[label] = w

    beliefs = {}
    for j, row in _require(data, "beliefs", "structure").items():
        beliefs[j] = {}
        for t, per_event in row.items():
            measures = {}
            for b, masses in per_event.items():
                mapping = {}
                for key, mass in masses.items():
                    if key not in keys:
                        raise UnknownState(f"beliefs of {j}:{t} under {b!r}: unknown world {key!r}")
                    mapping[keys[key]] = mass
                measures[b] = Measure.from_mapping(world, mapping)
            beliefs[j][t] = Cps(world, measures)
    return TypeStructure(space, players, types, beliefs, valuation)


def structure_to_json(ts: TypeStructure) -> dict:
    out = {
        "space": {
            "states": [str(s) for s in ts.space.states],
            "conditioning": {b: [str(s) for s in ts.space.labels(e)] for b, e in ts.space.conditioning.items()},
        },
        "players": list(ts.players),
        "types": {j: [str(t) for t in ts.types[j]] for j in ts.players},
        "beliefs": {
            j: {str(t): ts.beliefs[j][t].to_dict() for t in ts.types[j]} for j in ts.players
        },
    }
    if ts.valuation is not None:
        out.update(valuation_to_json(ts.valuation))
    return out


def morphism_from_json(data: dict) -> MorphismSpec:
    maps = data.get("map", data)
    nature = maps.get(NATURE)
    return MorphismSpec({str(j): {str(t): str(u) for t, u in m.items()} for j, m in maps.items() if j != NATURE}, nature)
