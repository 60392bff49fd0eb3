"""Stretch healing: compensating peers multiply their degree by ``beta``.

A peer with degree ``d`` that compensates adds ``(beta - 1) * d`` new edges
to degree-proportionally chosen peers, so hub degrees clipped at ``d0`` by
an attack can grow back to about ``beta * d0``.  With compensation
probability ``f = beta**-alpha`` a power-law body keeps its exponent.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Iterable

from .attack import EdgeLossEvent
from .errors import InvalidParameterError, UnknownPeerError
from .graph import DegreeHistogram, Graph, as_random


def compute_f(alpha: float, beta: float) -> float:
    if alpha <= 0:
        raise InvalidParameterError(f"alpha must be positive (got {alpha})")
    if beta < 1:
        raise InvalidParameterError(f"beta must be >= 1 (got {beta})")
    if beta == 1:
        return 1.0
    return float(beta) ** (-float(alpha))


@dataclass(frozen=True)
class HealSpec:
    alpha: float
    beta: float

    def __post_init__(self):
        compute_f(self.alpha, self.beta)

    @property
    def f(self) -> float:
        return compute_f(self.alpha, self.beta)


@dataclass(frozen=True)
class HealReport:
    compensating_peers: int
    edges_added: int
    pre_hist: DegreeHistogram = field(repr=False)
    post_hist: DegreeHistogram = field(repr=False)

    def as_dict(self) -> dict:
        return {
            "compensating_peers": self.compensating_peers,
            "edges_added": self.edges_added,
            "pre_degree_sum": self.pre_hist.degree_sum,
            "post_degree_sum": self.post_hist.degree_sum,
            "pre_d_max": self.pre_hist.d_max_observed,
            "post_d_max": self.post_hist.d_max_observed,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def histograms_to_csv(self, pre_path, post_path) -> None:
        self.pre_hist.to_csv(pre_path)
        self.post_hist.to_csv(post_path)


def stochastic_round(x: float, rng: random.Random) -> int:
    """Floor of ``x`` plus a Bernoulli draw on the fractional part (exact in expectation)."""
    base = math.floor(x)
    frac = x - base
    if frac > 0 and rng.random() < frac:
        base += 1
    return int(base)


def heal_stretch(graph: Graph, spec: HealSpec, seed=None) -> HealReport:
    """One healing pass over all peers; mutates ``graph``.

    Participation and edge counts come from a degree snapshot taken before
    any edge is added, and peers are visited in id order.
    """
    rng = as_random(seed)
    pre = graph.histogram()
    f = spec.f
    stretch = spec.beta - 1.0
    snapshot = graph.degrees()
    compensating = 0
    added = 0
    if stretch > 0:
        for u in sorted(snapshot):
            d = snapshot[u]
            if rng.random() >= f or d == 0:
                continue
            compensating += 1
            added += graph.attach_preferential(u, stochastic_round(stretch * d, rng), rng)
    return HealReport(compensating, added, pre, graph.histogram())


def trigger_probability(lost: int, degree_before: int) -> float:
    """Chance that at least one of ``lost`` edge losses fires at rate ``1/degree_before``."""
    if lost <= 0 or degree_before <= 0:
        return 0.0
    return 1.0 - (1.0 - 1.0 / degree_before) ** lost


def feedback_heal(graph: Graph, events: Iterable[EdgeLossEvent], spec: HealSpec, seed=None) -> HealReport:
    """React to edge losses: each lost edge fires healing with probability ``1/k_i``.

    ``k_i`` is the peer's degree before the loss.  A peer heals at most once
    per pass, adding ``(beta - 1) * d_i`` preferential edges where ``d_i`` is
    its degree after the loss.
    """
    rng = as_random(seed)
    events = sorted(events, key=lambda ev: ev.peer)
    for ev in events:
        if ev.peer not in graph:
            raise UnknownPeerError(f"event references peer {ev.peer}, which is not in the graph")
    pre = graph.histogram()
    stretch = spec.beta - 1.0
    fired = []
    for ev in events:
        for _ in range(ev.lost):
            if rng.random() * ev.degree_before < 1.0:
                fired.append(ev.peer)
                break
    snapshot = {u: graph.degree(u) for u in fired}
    added = 0
    for u in fired:
        if stretch > 0 and snapshot[u] > 0:
            added += graph.attach_preferential(u, stochastic_round(stretch * snapshot[u], rng), rng)
    return HealReport(len(fired), added, pre, graph.histogram())
