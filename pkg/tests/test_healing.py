import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from p2pheal.attack import EdgeLossEvent, attack_top_degree
from p2pheal.errors import InvalidParameterError, UnknownPeerError
from p2pheal.experiment import percentile_cutoff
from p2pheal.graph import Graph, generate_powerlaw_config, generate_preferential
from p2pheal.healing import HealSpec, compute_f, feedback_heal, heal_stretch, stochastic_round, trigger_probability
from p2pheal.powerlaw import fit_powerlaw

from oracles import exact_power


def test_compute_f_values():
    assert compute_f(2.4, 1) == 1.0
    assert compute_f(2.4, 2) == pytest.approx(float(exact_power(2, 2.4)), abs=1e-15)
    assert compute_f(2.4, 2) == pytest.approx(0.18946457, abs=1e-8)
    assert compute_f(3.2, 20) == pytest.approx(6.87e-5, rel=1e-3)


@pytest.mark.parametrize("alpha, beta", [(0, 2), (-1, 2), (2.4, 0.5)])
def test_compute_f_rejects(alpha, beta):
    with pytest.raises(InvalidParameterError):
        compute_f(alpha, beta)


@settings(max_examples=200)
@given(st.floats(0.1, 5), st.floats(0.1, 5), st.floats(1.01, 30))
def test_compute_f_monotone(a1, a2, beta):
    lo, hi = sorted((a1, a2))
    if hi - lo > 1e-6:
        assert compute_f(hi, beta) < compute_f(lo, beta)
    assert compute_f(lo, beta * 1.5) < compute_f(lo, beta)


def test_stochastic_round_expectation():
    rng = random.Random(0)
    draws = [stochastic_round(2.3, rng) for _ in range(20000)]
    assert set(draws) == {2, 3}
    assert np.mean(draws) == pytest.approx(2.3, abs=0.02)
    assert stochastic_round(4.0, rng) == 4


def test_beta_one_is_exact_noop():
    g = generate_preferential(2000, 2, 4)
    before = g.copy()
    rep = heal_stretch(g, HealSpec(2.4, 1.0), seed=3)
    assert g == before
    assert rep.edges_added == 0 and rep.pre_hist == rep.post_hist


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.floats(1.0, 6.0), st.floats(1.5, 3.5))
def test_degree_sum_accounting(seed, beta, alpha):
    g = generate_preferential(300, 2, seed)
    rep = heal_stretch(g, HealSpec(alpha, beta), seed)
    assert rep.post_hist.degree_sum - rep.pre_hist.degree_sum == 2 * rep.edges_added
    g.audit()


def test_single_edge_enumeration():
    # both peers have degree 1; any far endpoint is the peer itself or its partner,
    # so no edge can ever be placed.  Enumerate the 4 participation outcomes.
    f = 3 ** -2.4
    probs = {}
    for a, b in itertools.product((0, 1), repeat=2):
        probs[a + b] = probs.get(a + b, 0) + (f if a else 1 - f) * (f if b else 1 - f)
    trials = 40000
    counts = np.zeros(3)
    for s in range(trials):
        g = Graph.from_edges([(0, 1)])
        rep = heal_stretch(g, HealSpec(2.4, 3.0), seed=s)
        assert rep.edges_added == 0
        counts[rep.compensating_peers] += 1
    for k in range(3):
        sd = np.sqrt(trials * probs[k] * (1 - probs[k]))
        assert abs(counts[k] - trials * probs[k]) <= 4 * sd + 1


def test_participation_rate_two_edges():
    f = 3 ** -2.4
    trials = 20000
    got = []
    for s in range(trials):
        g = Graph.from_edges([(0, 1), (2, 3)])
        got.append(heal_stretch(g, HealSpec(2.4, 3.0), seed=s).compensating_peers)
    assert np.mean(got) == pytest.approx(4 * f, abs=4 * np.sqrt(4 * f * (1 - f) / trials))


def truncated_pl(alpha, seed, n=50000):
    g = generate_powerlaw_config(alpha, 300, n, seed)
    attack_top_degree(g, percentile_cutoff(g, 99.5))
    return g


@pytest.mark.parametrize("beta", [8, 14, 20])
def test_exponent_preserved_alpha_24(beta):
    ex = []
    for s in range(10):
        g = truncated_pl(2.4, s)
        d0 = g.max_degree()
        heal_stretch(g, HealSpec(2.4, beta), s)
        ex.append(fit_powerlaw(g.histogram(), 1, beta * d0).exponent)
    assert abs(np.mean(ex) - 2.4) <= 0.2


FEW_HUBS = pytest.mark.xfail(
    strict=True,
    reason="f = beta**-alpha leaves ~50000 * 20**-2.4 = 38 compensating peers, rarely a near-d0 hub",
)


@pytest.mark.parametrize("beta", [2, 8, pytest.param(14, marks=FEW_HUBS), pytest.param(20, marks=FEW_HUBS)])
def test_max_degree_restoration(beta):
    ratios = []
    for s in range(10):
        g = truncated_pl(2.4, s)
        d0 = g.max_degree()
        heal_stretch(g, HealSpec(2.4, beta), s)
        ratios.append(g.max_degree() / (beta * d0))
    assert 0.5 <= np.mean(ratios) <= 1.5


def test_feedback_empty_and_forced():
    g = generate_preferential(100, 2, 0)
    before = g.copy()
    rep = feedback_heal(g, [], HealSpec(2.4, 3), seed=1)
    assert g == before and rep.compensating_peers == 0

    g = Graph.from_edges([(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 6)])
    g.remove_edge(5, 6)
    g.add_edge(5, 0)
    rep = feedback_heal(g, [EdgeLossEvent(6, 1, 1)], HealSpec(2.4, 3), seed=2)
    assert rep.compensating_peers == 1


def test_feedback_unknown_peer():
    g = Graph.from_edges([(0, 1)])
    with pytest.raises(UnknownPeerError):
        feedback_heal(g, [EdgeLossEvent(9, 1, 2)], HealSpec(2.4, 2))


def test_trigger_probability():
    assert trigger_probability(1, 1) == 1.0
    assert trigger_probability(2, 4) == pytest.approx(1 - 0.75 ** 2)
    assert trigger_probability(0, 3) == 0.0


def test_feedback_trigger_rate_per_degree_class():
    fired = {}
    total = {}
    expected = {}
    pbars = []
    for s in range(50):
        g = generate_powerlaw_config(2.4, 300, 5000, seed=1000 + s)
        rep = attack_top_degree(g, 20)
        pbars.append(rep.pbar_empirical)
        degrees_before = {ev.peer: ev.degree_before for ev in rep.edge_loss_events}
        hrep_peers = set()
        rng_seed = 2000 + s
        h = g.copy()
        out = feedback_heal(h, rep.edge_loss_events, HealSpec(2.4, 2), rng_seed)
        assert out.compensating_peers <= len(rep.edge_loss_events)
        # replay the trigger draws: same stream, peers sorted, one draw per lost edge
        rng = random.Random(rng_seed)
        for ev in sorted(rep.edge_loss_events, key=lambda e: e.peer):
            for _ in range(ev.lost):
                if rng.random() * ev.degree_before < 1.0:
                    hrep_peers.add(ev.peer)
                    break
        assert len(hrep_peers) == out.compensating_peers
        survivors = list(g)
        pre_deg = {u: degrees_before.get(u, g.degree(u)) for u in survivors}
        lost = {ev.peer: ev.lost for ev in rep.edge_loss_events}
        for u in survivors:
            k = pre_deg[u]
            if k == 0:
                continue
            bucket = min(k, 8)
            total[bucket] = total.get(bucket, 0) + 1
            fired[bucket] = fired.get(bucket, 0) + (u in hrep_peers)
            expected[bucket] = expected.get(bucket, 0.0) + trigger_probability(lost.get(u, 0), k)
    pbar = float(np.mean(pbars))
    for b in total:
        n = total[b]
        mean_p = expected[b] / n
        assert abs(fired[b] - expected[b]) <= 3 * np.sqrt(n * mean_p * (1 - mean_p)) + 1
        # per-peer trigger rate ~ pbar regardless of degree class
        assert abs(fired[b] / n - pbar) <= 0.35 * pbar
