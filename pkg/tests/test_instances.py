import random

import pytest

from hampower.core import (
    collection_from_dict,
    collection_to_dict,
    host_edges,
    min_degree,
    pattern_from_dict,
    pattern_to_dict,
    power_cycle,
)
from hampower.errors import InvalidInstanceError
from hampower.instances import (
    bijective_pattern,
    complete_collection,
    complete_rpartite_collection,
    lowerbound_construction,
    random_min_degree_collection,
    random_rpartite_collection,
)


class TestCompleteCollection:
    def test_two_triangles(self):
        coll = complete_collection(3, 2)
        assert coll.m == 2
        assert all(coll.graphs[g][v] == tuple(u for u in range(3) if u != v)
                   for g in range(2) for v in range(3))

    def test_single_vertex_is_edgeless(self):
        coll = complete_collection(1, 1)
        assert coll.graphs[0][0] == ()

    def test_min_degree(self):
        assert min_degree(complete_collection(13, 7)) == 12


class TestRandomMinDegree:
    def test_degree_floor_enforced(self):
        for seed in range(20):
            rng = random.Random(seed)
            coll = random_min_degree_collection(60, 2, 0.8, rng)
            assert min_degree(coll) >= 48

    def test_zero_fraction_accepts_sparse(self):
        rng = random.Random(99)
        coll = random_min_degree_collection(10, 1, 0.0, rng)
        assert min_degree(coll) >= 0

    def test_full_fraction_gives_complete(self):
        rng = random.Random(100)
        n = 12
        coll = random_min_degree_collection(n, 1, (n - 1) / n, rng)
        assert min_degree(coll) == n - 1


class TestRPartite:
    def test_complete_rpartite_degrees(self):
        coll, parts = complete_rpartite_collection(4, 5, 3)
        assert min_degree(coll) == 15  # n - part_size
        assert [len(p) for p in parts] == [5, 5, 5, 5]

    def test_random_rpartite_pair_floor(self):
        rng = random.Random(101)
        coll, parts = random_rpartite_collection(4, 8, 2, 0.75, rng)
        from hampower.core import min_bipartite_degree

        for i in range(4):
            for j in range(i + 1, 4):
                assert min_bipartite_degree(coll, parts[i], parts[j]) >= 6

    def test_full_density_is_complete_rpartite(self):
        rng = random.Random(102)
        coll, parts = random_rpartite_collection(3, 4, 1, 1.0, rng)
        complete, _ = complete_rpartite_collection(3, 4, 1)
        assert coll == complete


class TestLowerBound:
    def test_k2_p3_degrees(self):
        coll, _ = lowerbound_construction(2, 3)
        assert coll.n == 9
        assert min_degree(coll) == 6  # 2/3 n = 2p

    def test_k2_colour2_edges_figure_orientation(self):
        _, pattern = lowerbound_construction(2, 3, "figure")
        colour2 = sorted(e for e, c in pattern.colours.items() if c == 2)
        assert colour2 == [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4)]

    def test_k2_colour2_edges_text_orientation(self):
        _, pattern = lowerbound_construction(2, 3, "text")
        colour2 = sorted(e for e, c in pattern.colours.items() if c == 2)
        assert colour2 == [(0, 2), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]

    def test_k1_p3_structure(self):
        coll, pattern = lowerbound_construction(1, 3)
        assert coll.n == 6
        # G2 = two disjoint triangles plus a perfect matching between parts
        g2_degrees = [len(coll.graphs[1][v]) for v in range(6)]
        assert g2_degrees == [3] * 6
        edges_between = [
            (u, v)
            for u in range(3)
            for v in coll.graphs[1][u]
            if v >= 3
        ]
        assert len(edges_between) == 3  # matching, not K_{3,3}

    def test_paired_part_bipartite_is_matching(self):
        for k, p in ((2, 3), (3, 3), (2, 4)):
            coll, _ = lowerbound_construction(k, p)
            between = [
                (u, v) for u in range(p) for v in coll.graphs[1][u] if p <= v < 2 * p
            ]
            assert len(between) == p

    def test_min_degree_formula(self):
        for k, p in ((1, 3), (2, 3), (2, 4), (3, 3), (4, 3)):
            coll, _ = lowerbound_construction(k, p)
            assert min_degree(coll) == k * p

    def test_small_p_rejected(self):
        with pytest.raises(InvalidInstanceError):
            lowerbound_construction(2, 2)

    def test_orientations_agree_for_k1(self):
        _, fig = lowerbound_construction(1, 3, "figure")
        _, txt = lowerbound_construction(1, 3, "text")
        assert dict(fig.colours) == dict(txt.colours)

    def test_serialization_round_trip(self):
        coll, pattern = lowerbound_construction(2, 3)
        assert collection_from_dict(collection_to_dict(coll)) == coll
        again = pattern_from_dict(pattern_to_dict(pattern))
        assert dict(again.colours) == dict(pattern.colours)


class TestPatternGenerators:
    def test_bijective_pattern_uses_each_colour_once(self):
        host = power_cycle(9, 2)
        pattern = bijective_pattern(host)
        colours = sorted(pattern.colours.values())
        assert colours == list(range(1, 19))

    def test_bijective_pattern_shuffles_with_rng(self):
        host = power_cycle(9, 2)
        a = bijective_pattern(host, random.Random(1))
        b = bijective_pattern(host, random.Random(2))
        assert dict(a.colours) != dict(b.colours)
        assert sorted(a.colours.values()) == sorted(b.colours.values())

    def test_random_pattern_covers_host(self):
        rng = random.Random(103)
        host = power_cycle(8, 2)
        pattern = bijective_pattern(host)
        assert set(pattern.colours) == set(host_edges(host))
