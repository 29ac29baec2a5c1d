import random
from itertools import combinations

import pytest

from contsolve.core import (
    Hypergraph,
    ParameterError,
    PreconditionError,
    SizeLimitError,
    complete_graph,
)
from contsolve.extsum import (
    ExtSumInstance,
    eval_disjoint,
    eval_k2,
    eval_k3,
    eval_naive,
    evaluate,
    hyperclique_count,
    hyperclique_to_extsum,
    reduce_refinement,
    refinement_from_witness,
    refinement_witness,
)
from oracles import count_hypercliques


def random_instance(rng, k, max_universe=18, max_subset=10):
    nx = rng.randint(1, max_universe)
    subsets, tables = [], []
    for _ in range(k):
        sz = rng.randint(0, min(nx, max_subset))
        xs = tuple(sorted(rng.sample(range(nx), sz)))
        subsets.append(xs)
        tables.append(tuple(rng.randint(-9, 9) for _ in range(1 << sz)))
    return ExtSumInstance(nx, tuple(subsets), tuple(tables))


def random_disjoint_instance(rng, k, max_universe=18):
    nx = rng.randint(k, max_universe)
    pool = list(range(nx))
    rng.shuffle(pool)
    subsets, tables = [], []
    for _ in range(k):
        take = rng.randint(0, max(0, len(pool) // (k + 1)))
        xs = tuple(sorted(pool[:take]))
        pool = pool[take:]
        subsets.append(xs)
        tables.append(tuple(rng.randint(-9, 9) for _ in range(1 << len(xs))))
    return ExtSumInstance(nx, tuple(subsets), tuple(tables))


class TestHandExamples:
    def test_naive_single_subset(self):
        inst = ExtSumInstance(1, ((0,),), ((2, 3),))
        assert eval_naive(inst) == 5

    def test_naive_all_ones(self):
        inst = ExtSumInstance(2, ((0,), (1,)), ((1, 1), (1, 1)))
        assert eval_naive(inst) == 4

    def test_naive_repeated_variable(self):
        inst = ExtSumInstance(1, ((0,), (0,)), ((1, 2), (3, 4)))
        assert eval_naive(inst) == 11
        assert eval_k2(inst) == 11

    def test_disjoint_free_variable(self):
        inst = ExtSumInstance(2, ((0,),), ((1, 1),))
        assert eval_disjoint(inst) == 4

    def test_disjoint_factorization(self):
        inst = ExtSumInstance(2, ((0,), (1,)), ((2, 5), (3, 4)))
        assert eval_disjoint(inst) == 7 * 7

    def test_disjoint_rejects_overlap(self):
        inst = ExtSumInstance(1, ((0,), (0,)), ((1, 2), (3, 4)))
        with pytest.raises(PreconditionError):
            eval_disjoint(inst)

    def test_k3_all_ones_pairwise_overlaps(self):
        inst = ExtSumInstance(
            3,
            ((0, 1), (1, 2), (0, 2)),
            ((1, 1, 1, 1), (1, 1, 1, 1), (1, 1, 1, 1)),
        )
        assert eval_k3(inst) == 8

    def test_arity_checks(self):
        inst = ExtSumInstance(1, ((0,),), ((1, 1),))
        with pytest.raises(ParameterError):
            eval_k2(inst)
        with pytest.raises(ParameterError):
            eval_k3(inst)

    def test_naive_limit(self):
        inst = ExtSumInstance(25, (), ())
        with pytest.raises(SizeLimitError):
            eval_naive(inst)


class TestOracleEquivalence:
    def test_disjoint_matches_naive(self):
        rng = random.Random(10)
        for _ in range(120):
            inst = random_disjoint_instance(rng, rng.randint(1, 4))
            assert eval_disjoint(inst) == eval_naive(inst)

    def test_k2_matches_naive_with_work_bound(self):
        rng = random.Random(11)
        for _ in range(150):
            inst = random_instance(rng, 2)
            stats = {}
            assert eval_k2(inst, stats) == eval_naive(inst)
            assert stats["inner_iterations"] <= (1 << len(inst.subsets[0])) + (
                1 << len(inst.subsets[1])
            )

    def test_k3_matches_naive(self):
        rng = random.Random(12)
        for _ in range(120):
            inst = random_instance(rng, 3, max_universe=14, max_subset=8)
            assert eval_k3(inst) == eval_naive(inst)

    def test_k2_disjoint_degenerates(self):
        rng = random.Random(13)
        for _ in range(40):
            inst = random_disjoint_instance(rng, 2)
            assert eval_k2(inst) == eval_disjoint(inst)

    def test_dispatcher(self):
        rng = random.Random(14)
        for k in (0, 1, 2, 3):
            for _ in range(20):
                inst = random_instance(rng, k, max_universe=12, max_subset=6)
                assert evaluate(inst) == eval_naive(inst)


class TestReduceRefinement:
    def test_identity_refinement(self):
        rng = random.Random(20)
        inst = random_instance(rng, 3, max_universe=10, max_subset=5)
        reduced = reduce_refinement(inst, [(0,), (1,), (2,)])
        assert reduced.subsets == inst.subsets
        assert eval_naive(reduced) == eval_naive(inst)

    def test_merge_preserves_value(self):
        rng = random.Random(21)
        for _ in range(80):
            k = rng.randint(2, 4)
            inst = random_instance(rng, k, max_universe=12, max_subset=6)
            indices = list(range(k))
            rng.shuffle(indices)
            cut = rng.randint(1, k)
            parts = [tuple(sorted(indices[:cut]))]
            if cut < k:
                parts.append(tuple(sorted(indices[cut:])))
            reduced = reduce_refinement(inst, parts)
            assert eval_naive(reduced) == eval_naive(inst)

    def test_merge_all(self):
        rng = random.Random(22)
        inst = random_instance(rng, 3, max_universe=10, max_subset=5)
        reduced = reduce_refinement(inst, [(0, 1, 2)])
        assert reduced.k == 1
        assert eval_naive(reduced) == eval_naive(inst)

    def test_bad_partition_rejected(self):
        inst = ExtSumInstance(2, ((0,), (1,)), ((1, 1), (1, 1)))
        with pytest.raises(ParameterError):
            reduce_refinement(inst, [(0,)])
        with pytest.raises(ParameterError):
            reduce_refinement(inst, [(0, 1), (1,)])

    def test_json_roundtrip(self):
        rng = random.Random(23)
        inst = random_instance(rng, 2, max_universe=8, max_subset=4)
        assert ExtSumInstance.from_json(inst.to_json()) == inst


class TestHypercliqueReduction:
    def test_k4_triangles(self):
        h = Hypergraph(4, 2, complete_graph(4).edges)
        assert hyperclique_count(h, 3) == 4

    def test_no_edges(self):
        h = Hypergraph(5, 3, [])
        assert hyperclique_count(h, 4) == 0

    def test_single_edge_no_bigger_clique(self):
        h = Hypergraph(5, 3, [(0, 1, 2)])
        assert hyperclique_count(h, 4) == 0

    def test_k_must_exceed_r(self):
        h = Hypergraph(4, 2, [(0, 1)])
        with pytest.raises(ParameterError):
            hyperclique_to_extsum(h, 2)

    def test_random_graphs_match_brute_force(self):
        rng = random.Random(30)
        for _ in range(12):
            n = rng.randint(4, 8)
            pool = list(combinations(range(n), 2))
            edges = rng.sample(pool, rng.randint(0, len(pool)))
            h = Hypergraph(n, 2, edges)
            for k in (3, 4):
                assert hyperclique_count(h, k) == count_hypercliques(h, k)

    def test_random_hypergraphs_match_brute_force(self):
        rng = random.Random(31)
        for _ in range(6):
            n = rng.randint(4, 7)
            pool = list(combinations(range(n), 3))
            edges = rng.sample(pool, rng.randint(0, len(pool)))
            h = Hypergraph(n, 3, edges)
            assert hyperclique_count(h, 4) == count_hypercliques(h, 4)


class TestRefinementWitness:
    def test_negative_fixture_k2(self):
        # all 2-subsets of a 4-element universe: every pair of universe
        # elements is inside some subset, so no 2-part refinement avoids X
        subsets = [frozenset(c) for c in combinations(range(4), 2)]
        assert refinement_witness(4, subsets, 2) is None

    def test_negative_fixture_k3(self):
        subsets = [frozenset(c) for c in combinations(range(6), 3)]
        assert refinement_witness(6, subsets, 3) is None

    def test_positive_direction_exhaustive_small(self):
        # every collection of K half-size subsets admits a refinement into
        # floor(log2 K) + 1 parts with all unions proper
        for n in (2, 3, 4):
            half = [frozenset(s) for sz in range(n // 2 + 1) for s in combinations(range(n), sz)]
            for big_k in (2, 3):
                k = big_k.bit_length()  # floor(log2 K) + 1
                for collection in combinations(half, big_k):
                    w = refinement_witness(n, list(collection), k)
                    assert w is not None
                    parts = refinement_from_witness(list(collection), w)
                    covered = [i for p in parts for i in p]
                    assert sorted(covered) == list(range(big_k))

    def test_positive_direction_sampled_large(self):
        rng = random.Random(40)
        for _ in range(300):
            n = rng.randint(4, 10)
            big_k = rng.randint(2, 7)
            k = big_k.bit_length()
            assert k <= 3
            collection = []
            for _ in range(big_k):
                sz = rng.randint(0, n // 2)
                collection.append(frozenset(rng.sample(range(n), sz)))
            w = refinement_witness(n, collection, k)
            assert w is not None
