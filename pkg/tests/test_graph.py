import itertools
import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from ndgcolor.errors import PreconditionError
from ndgcolor.graph import (CoreState, DeletionCertificate, Graph, MultiGraph, check_certificate,
                            clique_in_closed_neighborhood, complete_graph, connected_components, cycle_graph,
                            disjoint_union, induced_subgraph, is_clique, path_graph, peel, petersen_graph)

from strategies import graphs


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


class TestGraph:
    def test_dedup_and_symmetry(self):
        g = Graph(3, [(0, 1), (1, 0), (1, 2)])
        assert g.m == 2
        assert g.has_edge(1, 0) and g.has_edge(0, 1)
        assert g.edges() == [(0, 1), (1, 2)]
        assert g.adjacency[1] == frozenset({0, 2})

    def test_self_loop_rejected(self):
        with pytest.raises(PreconditionError):
            Graph(2, [(1, 1)])

    def test_bad_id_rejected(self):
        with pytest.raises(PreconditionError):
            Graph(2, [(0, 2)])

    def test_empty(self):
        g = Graph(0)
        assert g.m == 0 and g.max_degree() == 0 and g.edges() == []

    def test_from_adjacency_roundtrip(self):
        g = petersen_graph()
        assert Graph.from_adjacency([g.adjacency[v] for v in range(g.n)]) == g

    def test_multigraph_degree_counts_multiplicity(self):
        mg = MultiGraph(3, {(0, 1): 3, (1, 2): 1})
        assert mg.degrees().tolist() == [3, 4, 1]
        assert mg.multiplicity(1, 0) == 3
        assert mg.underlying().edges() == [(0, 1), (1, 2)]

    def test_multigraph_empty_rows(self):
        mg = MultiGraph(5, {(3, 4): 2})
        assert mg.degrees().tolist() == [0, 0, 0, 2, 2]


class TestInducedSubgraph:
    def test_k3_all(self):
        sub, lab = induced_subgraph(complete_graph(3), [0, 1, 2])
        assert sub == complete_graph(3) and lab == (0, 1, 2)

    def test_k3_two(self):
        sub, _ = induced_subgraph(complete_graph(3), [0, 2])
        assert sub.edges() == [(0, 1)]

    def test_c6_alternate(self):
        sub, lab = induced_subgraph(cycle_graph(6), [0, 2, 4])
        assert sub.n == 3 and sub.m == 0 and lab == (0, 2, 4)

    def test_invalid(self):
        with pytest.raises(PreconditionError):
            induced_subgraph(complete_graph(3), [0, 5])

    @given(graphs())
    def test_identity(self, g):
        sub, lab = induced_subgraph(g, range(g.n))
        assert sub == g and lab == tuple(range(g.n))


class TestPeel:
    def test_path_order(self, backend):
        res = peel(path_graph(3), range(3), 2, backend=backend)
        assert isinstance(res, DeletionCertificate)
        assert res.order == (0, 2, 1)

    def test_k5_stuck(self, backend):
        res = peel(complete_graph(5), range(5), 4, backend=backend)
        assert isinstance(res, CoreState)
        assert res.remaining == (0, 1, 2, 3, 4) and res.partial_order == ()

    def test_multiplicity(self, backend):
        res = peel(MultiGraph(2, {(0, 1): 3}), [0, 1], 3, backend=backend)
        assert isinstance(res, CoreState) and res.remaining == (0, 1)

    @given(graphs(max_n=14), st.integers(1, 5))
    def test_core_matches_networkx(self, g, t):
        res = peel(g, range(g.n), t)
        core = set(nx.k_core(to_nx(g), k=t).nodes()) if g.n else set()
        if isinstance(res, DeletionCertificate):
            assert not core
            assert check_certificate(g, range(g.n), res)
        else:
            assert set(res.remaining) == core

    @given(graphs(max_n=14), st.integers(1, 5), st.randoms())
    def test_confluent(self, g, t, rnd):
        # any deletion order reaches the same core
        alive = set(range(g.n))
        adj = g.adjacency
        while True:
            low = [v for v in alive if len(adj[v] & alive) < t]
            if not low:
                break
            alive.discard(rnd.choice(low))
        res = peel(g, range(g.n), t)
        got = set() if isinstance(res, DeletionCertificate) else set(res.remaining)
        assert got == alive

    def test_backends_agree(self):
        from ndgcolor import kernels
        if kernels.JIT is None:
            pytest.skip("numba missing")
        rng = random.Random(3)
        for _ in range(30):
            n = rng.randint(5, 40)
            g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.3])
            t = rng.randint(1, 6)
            assert peel(g, range(n), t, backend=kernels.PY) == peel(g, range(n), t, backend=kernels.JIT)

    def test_targets_subset(self):
        g = complete_graph(4)
        res = peel(g, [0, 1], 2)
        # outsiders never count: K2 on {0,1} peels at threshold 2
        assert isinstance(res, DeletionCertificate) and sorted(res.order) == [0, 1]


class TestClique:
    def test_k4(self):
        assert clique_in_closed_neighborhood(complete_graph(4), 2, 4) == (0, 1, 2, 3)

    def test_c5(self):
        assert all(clique_in_closed_neighborhood(cycle_graph(5), v, 3) is None for v in range(5))

    def test_k4_minus_edge(self):
        g = Graph(4, [e for e in itertools.combinations(range(4), 2) if e != (0, 1)])
        assert clique_in_closed_neighborhood(g, 0, 4) is None

    def test_v_outside_within(self):
        with pytest.raises(PreconditionError):
            clique_in_closed_neighborhood(complete_graph(4), 0, 2, within=[1, 2])

    @given(graphs(max_n=11), st.integers(1, 5), st.data())
    def test_exhaustive(self, g, k, data):
        if g.n == 0:
            return
        v = data.draw(st.integers(0, g.n - 1))
        within = set(data.draw(st.lists(st.integers(0, g.n - 1), unique=True))) | {v}
        got = clique_in_closed_neighborhood(g, v, k, within=within)
        nb = sorted((g.adjacency[v] & within))
        expect = None
        for sub in itertools.combinations(nb, k - 1):
            if is_clique(g, sub):
                cand = tuple(sorted(sub + (v,)))
                if expect is None or cand < expect:
                    expect = cand
        assert got == expect


class TestComponents:
    def test_c6(self):
        assert connected_components(cycle_graph(6)) == [tuple(range(6))]

    def test_isolated(self):
        assert connected_components(Graph(3)) == [(0,), (1,), (2,)]

    def test_k3_k2(self):
        assert connected_components(disjoint_union(complete_graph(3), complete_graph(2))) == [(0, 1, 2), (3, 4)]

    @given(graphs())
    def test_vs_networkx(self, g):
        expect = sorted(tuple(sorted(c)) for c in nx.connected_components(to_nx(g)))
        assert sorted(connected_components(g)) == expect


def test_petersen_is_petersen():
    assert nx.is_isomorphic(to_nx(petersen_graph()), nx.petersen_graph())


def test_certificate_checker_rejects_bad_order():
    g = complete_graph(3)
    assert not check_certificate(g, range(3), DeletionCertificate((0, 1, 2), 2))
    assert check_certificate(g, range(3), DeletionCertificate((0, 1, 2), 3))
    assert np.all(g.degrees() == 2)
