import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from p2pheal import graph as gc
from p2pheal.errors import EmptyGraphError, InvalidParameterError
from p2pheal.graph import (ComponentCensus, Graph, component_census, configuration_graph, generate_powerlaw_config,
                           generate_preferential, preferential_sample, read_edgelist, write_edgelist)
from p2pheal.powerlaw import fit_powerlaw

from oracles import chi_square_stat, component_sizes_uf


def star(leaves=4):
    return Graph.from_edges([(0, i) for i in range(1, leaves + 1)])


def test_add_remove_keeps_audit():
    g = Graph.from_edges([(0, 1), (1, 2), (2, 0), (2, 3)])
    g.audit()
    assert not g.add_edge(0, 1)
    assert not g.add_edge(3, 3)
    g.remove_edge(0, 2)
    g.audit()
    assert g.remove_peer(2) == [1, 3]
    g.audit()
    assert g.n_edges == 1 and g.n_peers == 3


def test_peer_ids_are_not_reused():
    g = Graph.from_edges([(0, 1)])
    g.remove_peer(1)
    assert g.add_peer() == 2


def test_generate_preferential_minimal():
    g = generate_preferential(3, 1, seed=5)
    assert g.n_peers == 3
    assert g.n_edges in (2, 3)
    assert g.degree_sum == 2 * g.n_edges
    g.audit()


def test_generate_preferential_50000_edge_count():
    g = generate_preferential(50000, 2, seed=1)
    assert g.n_peers == 50000
    # clique of 3 (3 edges) plus 2 edges per arrival
    assert g.n_edges == 2 * (50000 - 3) + 3


@pytest.mark.parametrize("n_peers, n", [(2, 1), (3, 2), (10, 0)])
def test_generate_preferential_rejects(n_peers, n):
    with pytest.raises(InvalidParameterError):
        generate_preferential(n_peers, n)


def test_preferential_tail_exponent():
    # tail fit from d_min = 3n; exponent ~3 for linear preferential attachment
    ex = [fit_powerlaw(generate_preferential(10000, 2, s).histogram(), 6).exponent for s in range(20)]
    assert 2.5 <= np.mean(ex) <= 3.5


def test_config_degenerate_cap_is_matching():
    g = generate_powerlaw_config(2.4, 1, 10, seed=3)
    assert g.n_edges == 5
    assert all(g.degree(u) == 1 for u in g)
    g11 = generate_powerlaw_config(2.4, 1, 11, seed=3)
    assert g11.n_edges == 5


@pytest.mark.parametrize("theta, tol", [(2.4, 0.15), (3.2, 0.2)])
def test_config_fitted_exponent(theta, tol):
    ex = [fit_powerlaw(generate_powerlaw_config(theta, 300, 50000, s).histogram(), 1).exponent for s in range(10)]
    assert abs(np.mean(ex) - theta) <= tol


@pytest.mark.parametrize("args", [(1.0, 10, 100), (2.4, 0, 100), (2.4, 100, 100)])
def test_config_rejects(args):
    with pytest.raises(InvalidParameterError):
        generate_powerlaw_config(*args)


def test_realized_degree_never_exceeds_target():
    rng = np.random.default_rng(0)
    degrees = rng.integers(0, 8, size=200)
    g = configuration_graph(degrees, 1)
    for i, d in enumerate(degrees):
        assert g.degree(i) <= d
    g.audit()


def test_sample_single_edge_and_star():
    rng = random.Random(0)
    g = Graph.from_edges([(0, 1)])
    draws = Counter(preferential_sample(g, rng) for _ in range(20000))
    assert set(draws) == {0, 1}
    assert abs(draws[0] / 20000 - 0.5) < 0.02

    s = star(4)
    draws = Counter(preferential_sample(s, rng) for _ in range(80000))
    assert abs(draws[0] / 80000 - 0.5) < 0.01
    for leaf in range(1, 5):
        assert abs(draws[leaf] / 80000 - 0.125) < 0.01


def test_sample_never_returns_isolated():
    g = Graph.from_edges([(0, 1)], peers=[5, 6])
    rng = random.Random(1)
    assert {preferential_sample(g, rng) for _ in range(2000)} <= {0, 1}


def test_sample_empty_graph():
    with pytest.raises(EmptyGraphError):
        preferential_sample(Graph.from_edges([], peers=[0, 1]), random.Random(0))


def test_sample_path_chi_square():
    g = Graph.from_edges([(0, 1), (1, 2)])
    rng = random.Random(42)
    n = 10**6
    c = Counter(preferential_sample(g, rng) for _ in range(n))
    counts = [c[0], c[1], c[2]]
    stat = chi_square_stat(counts, [0.25, 0.5, 0.25])
    assert stats.chi2.sf(stat, df=2) > 0.01
    for obs, p in zip(counts, [0.25, 0.5, 0.25]):
        assert abs(obs - n * p) <= 3 * np.sqrt(n * p * (1 - p))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_sample_chi_square_random_graph(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 100)
    g = Graph()
    for i in range(n):
        g.add_peer(i)
    for _ in range(rng.randint(1, 3 * n)):
        g.add_edge(rng.randrange(n), rng.randrange(n))
    if g.n_edges == 0:
        g.add_edge(0, 1)
    draws = Counter(g.sample_preferential(rng) for _ in range(10**5))
    active = [u for u in g if g.degree(u) > 0]
    probs = [g.degree(u) / g.degree_sum for u in active]
    stat = chi_square_stat([draws[u] for u in active], probs)
    # Bonferroni over the 30 generated graphs
    assert stats.chi2.sf(stat, df=len(active) - 1) > 0.01 / 30
    assert set(draws) <= set(active)


def test_census_examples():
    empty = component_census(Graph())
    assert empty.sizes == () and empty.c_max == 0
    g = Graph.from_edges([(0, 1), (1, 2), (2, 0)], peers=[3])
    c = component_census(g)
    assert sorted(c.sizes) == [1, 3]
    assert c.mean_C == 2 and c.mean_C2 == 5 and c.c_max == 3
    p = component_census(Graph.from_edges([(i, i + 1) for i in range(4)]))
    assert p.sizes == (5,) and p.M == {5: 1.0}


edge_lists = st.lists(st.tuples(st.integers(0, 40), st.integers(0, 40)), max_size=80)


@settings(max_examples=1000, deadline=None)
@given(edge_lists, st.sets(st.integers(0, 50), max_size=10))
def test_census_matches_union_find(edges, extra):
    g = Graph.from_edges(edges, peers=sorted(extra))
    c = component_census(g)
    assert sum(c.sizes) == g.n_peers
    assert list(c.sizes) == component_sizes_uf(g.peers(), g.edges())
    if c.sizes:
        assert abs(sum(c.M.values()) - 1) < 1e-12
        assert c.mean_C2 >= c.mean_C ** 2 - 1e-9
        assert c.c_max == max(c.sizes)


@settings(max_examples=1000, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("aer"), st.integers(0, 30), st.integers(0, 30)), max_size=120))
def test_degree_sum_identity_under_mutation(ops):
    g = Graph()
    for i in range(31):
        g.add_peer(i)
    rng = random.Random(len(ops))
    for op, u, v in ops:
        if op == "a" and u in g and v in g:
            g.add_edge(u, v)
        elif op == "e" and g.has_edge(u, v):
            g.remove_edge(u, v)
        elif op == "r" and u in g:
            g.remove_peer(u)
            g.attach_preferential(g.add_peer(), 2, rng) if g.n_edges else g.add_peer()
        assert sum(g.degrees().values()) == 2 * g.n_edges == g.degree_sum
    g.audit()


def test_edgelist_roundtrip(tmp_path):
    g = Graph.from_edges([(3, 1), (0, 2), (1, 2)], peers=[7])
    path = tmp_path / "g.edgelist"
    write_edgelist(g, path)
    lines = path.read_text().splitlines()
    assert lines[:3] == ["0 2", "1 2", "1 3"]
    assert lines[3] == "7"
    assert read_edgelist(path) == g


def test_edgelist_rejects_garbage(tmp_path):
    path = tmp_path / "bad.edgelist"
    path.write_text("0 1\nx y\n")
    with pytest.raises(InvalidParameterError, match=":2:"):
        read_edgelist(path)


def test_histogram_csv_roundtrip(tmp_path):
    h = generate_preferential(200, 2, 0).histogram()
    h.to_csv(tmp_path / "h.csv")
    assert gc.DegreeHistogram.from_csv(tmp_path / "h.csv") == h
    assert h.n == 200


def test_census_from_sizes_moments():
    c = ComponentCensus.from_sizes([1, 1, 2])
    assert c.mean_C == pytest.approx(4 / 3)
    assert c.mean_C2 == pytest.approx(2)
