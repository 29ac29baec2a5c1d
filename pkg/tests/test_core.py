import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contsolve.core import (
    CnfFormula,
    Graph,
    Hypergraph,
    ParameterError,
    ParseError,
    VertexSet,
    complete_graph,
    cycle_graph,
    max_codegree,
    parse_dimacs_cnf,
    parse_dimacs_graph,
    random_ksat_formula,
    random_regular_graph,
)
from oracles import brute_codegree


class TestVertexSet:
    def test_basic_ops(self):
        a = VertexSet.of([0, 2, 5])
        b = VertexSet.of([2, 3])
        assert len(a) == 3 and 2 in a and 1 not in a
        assert (a | b).to_list() == [0, 2, 3, 5]
        assert (a & b).to_list() == [2]
        assert (a - b).to_list() == [0, 5]
        assert list(a) == [0, 2, 5]
        assert b.issubset(a | b)

    @given(st.sets(st.integers(0, 80)))
    def test_cardinality_is_popcount(self, members):
        vs = VertexSet.of(members)
        assert len(vs) == vs.mask.bit_count() == len(members)

    def test_immutable(self):
        vs = VertexSet.of([1])
        with pytest.raises(AttributeError):
            vs.mask = 0


class TestGraphParsing:
    def test_path_graph(self):
        g = parse_dimacs_graph("p edge 3 2\ne 1 2\ne 2 3\n")
        assert g.n == 3 and g.m == 2
        assert g.adj[1] == (0, 2)

    def test_empty_edge_list(self):
        g = parse_dimacs_graph("p edge 4 0\n")
        assert g.n == 4 and g.m == 0

    def test_duplicate_edge_rejected(self):
        with pytest.raises(ParseError):
            parse_dimacs_graph("p edge 2 2\ne 1 2\ne 1 2\n")

    def test_self_loop_rejected(self):
        with pytest.raises(ParseError):
            parse_dimacs_graph("p edge 2 1\ne 1 1\n")

    def test_out_of_range(self):
        with pytest.raises(ParseError):
            parse_dimacs_graph("p edge 2 1\ne 1 3\n")

    def test_roundtrip(self):
        g = cycle_graph(7)
        assert parse_dimacs_graph(g.to_dimacs()) == g
        assert Graph.from_json(g.to_json()) == g


class TestCnfParsing:
    def test_basic(self):
        phi = parse_dimacs_cnf("p cnf 2 1\n1 -2 0\n")
        assert phi.num_vars == 2 and phi.clauses == ((1, -2),)

    def test_tautology_rejected(self):
        with pytest.raises(ParseError):
            parse_dimacs_cnf("p cnf 1 1\n1 -1 0\n")

    def test_no_clauses(self):
        phi = parse_dimacs_cnf("p cnf 3 0\n")
        assert phi.num_vars == 3 and phi.clauses == ()

    def test_width_bound(self):
        with pytest.raises(ParseError):
            parse_dimacs_cnf("p cnf 3 1\n1 2 3 0\n", k_bound=2)

    def test_roundtrip(self):
        phi = random_ksat_formula(6, 10, 3, seed=1)
        assert parse_dimacs_cnf(phi.to_dimacs()) == phi
        assert CnfFormula.from_json(phi.to_json()) == phi


class TestGenerators:
    def test_k4_unique_cubic(self):
        for seed in (0, 1, 2):
            g = random_regular_graph(4, 3, seed)
            assert g == complete_graph(4)

    def test_degree_sequence(self):
        g = random_regular_graph(6, 2, 7)
        assert all(g.degree(v) == 2 for v in range(6))

    def test_odd_product_rejected(self):
        with pytest.raises(ParameterError):
            random_regular_graph(5, 3, 1)

    def test_deterministic(self):
        assert random_regular_graph(12, 4, 3) == random_regular_graph(12, 4, 3)
        assert random_ksat_formula(8, 20, 3, 5) == random_ksat_formula(8, 20, 3, 5)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(6, 14), st.sampled_from([2, 3, 4]), st.integers(0, 10**6))
    def test_regular_degrees_property(self, n, d, seed):
        if n * d % 2:
            n += 1
        g = random_regular_graph(n, d, seed)
        assert all(g.degree(v) == d for v in range(g.n))


class TestCodegree:
    def test_single_edge(self):
        h = Hypergraph(4, 3, [(1, 2, 3)])
        assert max_codegree(h, 1) == 1

    def test_shared_pair(self):
        h = Hypergraph(5, 3, [(1, 2, 3), (1, 2, 4)])
        assert max_codegree(h, 2) == 2

    def test_full_edge(self):
        h = Hypergraph(6, 3, [(1, 2, 3), (1, 4, 5)])
        assert max_codegree(h, 3) == 1

    def test_out_of_range(self):
        h = Hypergraph(4, 2, [(0, 1)])
        with pytest.raises(ParameterError):
            max_codegree(h, 3)

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_matches_brute_force(self, data):
        n = data.draw(st.integers(3, 12))
        r = data.draw(st.integers(2, min(4, n)))
        from itertools import combinations

        pool = list(combinations(range(n), r))
        edges = data.draw(st.lists(st.sampled_from(pool), min_size=0, max_size=12, unique=True))
        h = Hypergraph(n, r, edges)
        for i in range(1, r + 1):
            assert max_codegree(h, i) == brute_codegree(h, i)

    def test_hypergraph_roundtrip(self):
        h = Hypergraph(5, 3, [(0, 1, 2), (1, 3, 4)])
        assert Hypergraph.from_json(h.to_json()).edges == h.edges
