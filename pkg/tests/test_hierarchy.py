import random
import threading

import pytest
from hypothesis import given, settings, strategies as st

from cpstypes import (
    FIXPOINT,
    MorphismSpec,
    TypeStructure,
    check_morphism_preserves_descriptions,
    describe,
    description_tables,
    hierarchy_partition,
    new_space,
    quotient,
    tree_to_json,
    truncate,
)
from cpstypes.errors import DepthExceeded, MorphismInvalid, NegativeDepth, UnknownState, UnknownType

from builders import duplicate_type_structure, two_player_structure
from helpers import naive_descriptions, random_structure


def coin_and_sure():
    space = new_space(["s1", "s2"], {"All": ["s1", "s2"]})
    return TypeStructure.from_masses(
        space,
        ["1"],
        {"1": ["t1", "t2"]},
        {
            "1": {
                "t1": {"All": {("s1", "t1"): "1/2", ("s2", "t1"): "1/2"}},
                "t2": {"All": {("s1", "t2"): "1"}},
            }
        },
    )


class TestDescribe:
    def test_depth_zero_is_shared(self):
        ts = two_player_structure()
        assert describe(ts, "1", "a1", 0) is describe(ts, "1", "a2", 0)
        assert describe(ts, "1", "a1", 0) is describe(ts, "2", "b3", 0)

    def test_nature_describes_itself(self):
        ts = two_player_structure()
        assert describe(ts, "0", "s2", 4) == "s2"
        with pytest.raises(UnknownState):
            describe(ts, "0", "s9", 1)

    def test_first_order_beliefs_distinguish(self):
        ts = coin_and_sure()
        d1, d2 = describe(ts, "1", "t1", 1), describe(ts, "1", "t2", 1)
        assert d1 is not d2
        assert tree_to_json(d1)["levels"][0]["All"] == [
            {"world": ["s1", {"depth": 0, "levels": []}], "mass": "1/2"},
            {"world": ["s2", {"depth": 0, "levels": []}], "mass": "1/2"},
        ]

    def test_errors(self):
        ts = coin_and_sure()
        with pytest.raises(NegativeDepth):
            describe(ts, "1", "t1", -1)
        with pytest.raises(UnknownType):
            describe(ts, "1", "t9", 1)

    def test_interning_crosses_structures(self):
        assert describe(coin_and_sure(), "1", "t1", 3) is describe(duplicate_type_structure(), "1", "t2", 3)

    def test_concurrent_description(self):
        results = []

        def work():
            results.append(describe(two_player_structure(), "1", "a1", 4))

        threads = [threading.Thread(target=work) for _ in range(8)]
        for th in threads:
            th.start()
        for th in threads:
            th.join()
        assert all(r is results[0] for r in results)

    def test_every_level_measure_sums_to_one(self):
        d = describe(two_player_structure(), "2", "b3", 3)
        for level in d.levels():
            for _, items in level:
                assert sum(m for _, m in items) == 1


class TestTruncate:
    def test_own_depth_is_identity(self):
        d = describe(two_player_structure(), "1", "a1", 3)
        assert truncate(d, 3) is d

    def test_to_zero(self):
        d = describe(two_player_structure(), "1", "a1", 3)
        assert truncate(d, 0).depth == 0 and truncate(d, 0).levels() == []
        assert truncate("s1", 0) == "s1"

    def test_too_deep(self):
        with pytest.raises(DepthExceeded):
            truncate(describe(two_player_structure(), "1", "a1", 1), 2)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32))
    def test_truncation_commutes_with_describe(self, seed):
        ts = random_structure(random.Random(seed))
        for j in ts.players:
            for t in ts.types[j]:
                deep = describe(ts, j, t, 5)
                assert truncate(deep, 2) is describe(ts, j, t, 2)
                assert truncate(truncate(deep, 3), 2) is truncate(deep, 2)


class TestPartition:
    def test_identical_beliefs_one_block(self):
        space = new_space(["s1"], {"All": ["s1"]})
        ts = TypeStructure.from_masses(
            space, ["1"], {"1": ["t1", "t2"]}, {"1": {t: {"All": {("s1", t): 1}} for t in ["t1", "t2"]}}
        )
        for depth in [0, 1, 2, FIXPOINT]:
            assert hierarchy_partition(ts, depth).to_dict() == {"1": [["t1", "t2"]]}

    def test_duplicate_types(self):
        ts = duplicate_type_structure()
        assert hierarchy_partition(ts, 0).to_dict() == {"1": [["t1", "t2", "t3"]]}
        assert hierarchy_partition(ts, 1).to_dict() == {"1": [["t1", "t2"], ["t3"]]}
        fix = hierarchy_partition(ts, FIXPOINT)
        assert fix.to_dict() == {"1": [["t1", "t2"], ["t3"]]}
        assert fix.stable_at == 1
        assert fix.nature == (("s1",), ("s2",))

    def test_two_round_refinement(self):
        ts = two_player_structure()
        assert hierarchy_partition(ts, 1).to_dict() == {"1": [["a1", "a2"]], "2": [["b1"], ["b2"], ["b3"]]}
        fix = hierarchy_partition(ts, FIXPOINT)
        assert fix.stable_at == 2
        assert fix.is_discrete()

    def test_negative_depth(self):
        with pytest.raises(NegativeDepth):
            hierarchy_partition(two_player_structure(), -1)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32))
    def test_refinement_agrees_with_tree_equality(self, seed):
        ts = random_structure(random.Random(seed), max_types=5, max_players=2)
        bound = sum(len(ts.types[j]) for j in ts.players) + 1
        tables = description_tables(ts, bound)
        # uninterned trees grow exponentially; a shallow cross-check is enough
        shallow = min(bound, 3)
        naive = naive_descriptions(ts, shallow)
        previous = None
        for depth in range(bound + 1):
            part = hierarchy_partition(ts, depth)
            for j in ts.players:
                for t in ts.types[j]:
                    for u in ts.types[j]:
                        same_block = part.block_of(j, t) == part.block_of(j, u)
                        assert same_block == (tables[depth][j][t] is tables[depth][j][u])
            if previous is not None:
                for j in ts.players:
                    for t in ts.types[j]:
                        for u in ts.types[j]:
                            if part.block_of(j, t) == part.block_of(j, u):
                                assert previous.block_of(j, t) == previous.block_of(j, u)
            previous = part
        top = tables[shallow]
        for j in ts.players:
            for t in ts.types[j]:
                for u in ts.types[j]:
                    assert (top[j][t] is top[j][u]) == (naive[j][t] == naive[j][u])

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32))
    def test_stable_forever_after(self, seed):
        ts = random_structure(random.Random(seed))
        fix = hierarchy_partition(ts, FIXPOINT)
        assert fix.stable_at <= sum(len(ts.types[j]) - 1 for j in ts.players)
        for extra in range(1, 4):
            assert hierarchy_partition(ts, fix.stable_at + extra).same_partition(fix)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32))
    def test_morphisms_map_blocks_into_blocks(self, seed):
        ts = random_structure(random.Random(seed))
        q, f = quotient(ts)
        src, dst = hierarchy_partition(ts), hierarchy_partition(q)
        for j in ts.players:
            for block in src.blocks[j]:
                assert len({dst.block_of(j, f.type_map(j, t)) for t in block}) == 1


class TestPreservation:
    def test_identity(self):
        ts = two_player_structure()
        assert check_morphism_preserves_descriptions(ts, ts, MorphismSpec.identity(ts), 6).ok

    def test_quotient_map(self):
        ts = duplicate_type_structure()
        q, f = quotient(ts)
        stable = hierarchy_partition(ts).stable_at
        assert check_morphism_preserves_descriptions(ts, q, f, stable + 1).ok

    def test_refuses_non_morphisms(self):
        ts = two_player_structure()
        swap = MorphismSpec({"1": {"a1": "a2", "a2": "a1"}, "2": {"b1": "b1", "b2": "b2", "b3": "b3"}})
        with pytest.raises(MorphismInvalid):
            check_morphism_preserves_descriptions(ts, ts, swap, 2)


class TestExport:
    def test_deterministic_and_nested(self):
        ts = two_player_structure()
        a = tree_to_json(describe(ts, "1", "a1", 2))
        b = tree_to_json(describe(two_player_structure(), "1", "a1", 2))
        assert a == b
        assert a["depth"] == 2 and len(a["levels"]) == 2
        assert list(a["levels"][1]) == ["All", "B"]
        worlds = [entry["world"][0] for entry in a["levels"][1]["All"]]
        assert worlds == ["s1", "s3"]
        inner = a["levels"][1]["All"][0]["world"][2]
        assert inner["depth"] == 1

    def test_nature(self):
        assert tree_to_json("s1") == "s1"
