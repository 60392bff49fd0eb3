"""Peer-removal attacks and the edge-loss statistics they induce."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import InvalidParameterError
from .graph import DegreeHistogram, Graph, as_random

TOP_DEGREE = "top-degree-cutoff"
DEGREE_TARGETED = "degree-targeted"
UNIFORM = "uniform-random"
KINDS = (TOP_DEGREE, DEGREE_TARGETED, UNIFORM)


@dataclass(frozen=True)
class AttackSpec:
    kind: str
    k0: int | None = None
    m: float | None = None
    q: float | None = None
    fraction: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameterError(f"unknown attack kind {self.kind!r}")
        if self.kind == TOP_DEGREE:
            if self.k0 is None or self.k0 < 0:
                raise InvalidParameterError("top-degree attack needs k0 >= 0")
        elif self.kind == DEGREE_TARGETED:
            if self.m is None or self.q is None or self.m < 0 or self.q < 0:
                raise InvalidParameterError("degree-targeted attack needs m >= 0 and q >= 0")
        elif self.fraction is None or not 0 <= self.fraction <= 1:
            raise InvalidParameterError("uniform attack needs fraction in [0, 1]")

    def removal_probability(self, k: int) -> float:
        if self.kind == TOP_DEGREE:
            return 1.0 if k > self.k0 else 0.0
        if self.kind == UNIFORM:
            return float(self.fraction)
        return targeted_probability(k, self.m, self.q)


def targeted_probability(k: int, m: float, q: float) -> float:
    """``min(1, m * k**-q)``; degree-0 peers use ``k = 1``."""
    return min(1.0, m * max(k, 1) ** (-q))


class EdgeLossEvent(NamedTuple):
    peer: int
    lost: int
    degree_before: int


@dataclass(frozen=True)
class AttackReport:
    removed_peers: int
    edge_loss_events: tuple[EdgeLossEvent, ...] = field(repr=False)
    pbar_predicted: float
    pbar_empirical: float
    survivor_endpoint_loss: float
    pbar_closed_form: float | None = None

    def loss_by_degree(self) -> dict[int, dict[str, int]]:
        """Per pre-attack degree: number of peers that lost edges and edges lost."""
        peers = Counter()
        lost = Counter()
        for ev in self.edge_loss_events:
            peers[ev.degree_before] += 1
            lost[ev.degree_before] += ev.lost
        return {k: {"peers": peers[k], "edges_lost": lost[k]} for k in sorted(peers)}

    def as_dict(self) -> dict:
        return {
            "removed_peers": self.removed_peers,
            "affected_peers": len(self.edge_loss_events),
            "edges_lost": sum(ev.lost for ev in self.edge_loss_events),
            "pbar_predicted": self.pbar_predicted,
            "pbar_empirical": self.pbar_empirical,
            "pbar_closed_form": self.pbar_closed_form,
            "survivor_endpoint_loss": self.survivor_endpoint_loss,
            "loss_by_degree": {str(k): v for k, v in self.loss_by_degree().items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)


def edge_loss_probability(hist: DegreeHistogram, k0: int, total_edges: int) -> float:
    """Probability that a uniformly drawn edge endpoint sits on a peer of degree >= ``k0``.

    Computed as ``sum_{k >= k0} k * n_k / (2 * total_edges)``.
    """
    if total_edges <= 0:
        raise InvalidParameterError("total_edges must be positive")
    s = sum(k * c for k, c in hist.counts.items() if k >= k0)
    return min(1.0, s / (2.0 * total_edges))


def edge_loss_closed_form(k0: float, xi: float, sigma: float) -> float:
    """Analytic estimate ``xi * k0**(2 - sigma)`` of the edge-loss probability.

    ``sigma`` is the network's power-law exponent; ``xi`` is an O(1) constant.
    """
    if k0 <= 0:
        raise InvalidParameterError("k0 must be positive for the closed form")
    return float(xi) * float(k0) ** (2.0 - float(sigma))


def _remove(graph: Graph, doomed: list[int], pbar_predicted: float, closed=None) -> AttackReport:
    total_ends = graph.degree_sum
    doomed_set = set(doomed)
    before = {}
    lost = Counter()
    removed_ends = 0
    for u in doomed:
        removed_ends += graph.degree(u)
        for v in graph.neighbors(u):
            if v not in doomed_set:
                lost[v] += 1
    for v in lost:
        before[v] = graph.degree(v)
    survivor_ends = total_ends - removed_ends
    for u in doomed:
        graph.remove_peer(u)
    events = tuple(EdgeLossEvent(v, lost[v], before[v]) for v in sorted(lost))
    return AttackReport(
        removed_peers=len(doomed),
        edge_loss_events=events,
        pbar_predicted=pbar_predicted,
        pbar_empirical=removed_ends / total_ends if total_ends else 0.0,
        survivor_endpoint_loss=sum(lost.values()) / survivor_ends if survivor_ends else 0.0,
        pbar_closed_form=closed,
    )


def attack_top_degree(graph: Graph, k0: int, xi: float | None = None, sigma: float | None = None) -> AttackReport:
    """Remove every peer whose degree exceeds ``k0``; mutates ``graph``.

    Degrees are read once before any removal.  ``pbar_empirical`` is the
    fraction of pre-attack edge endpoints owned by removed peers.  When
    ``xi`` and ``sigma`` are given, the closed-form estimate is attached.
    """
    if k0 < 0:
        raise InvalidParameterError("k0 must be >= 0")
    degrees = graph.degrees()
    doomed = sorted(u for u, d in degrees.items() if d > k0)
    pred = edge_loss_probability(graph.histogram(), k0 + 1, graph.n_edges) if graph.n_edges else 0.0
    closed = edge_loss_closed_form(k0, xi, sigma) if xi is not None and sigma is not None and k0 > 0 else None
    return _remove(graph, doomed, pred, closed)


def attack_degree_targeted(graph: Graph, m: float, q: float, seed=None) -> AttackReport:
    """Remove each degree-k peer independently with probability ``min(1, m * k**-q)``."""
    if m < 0 or q < 0:
        raise InvalidParameterError("need m >= 0 and q >= 0")
    rng = as_random(seed)
    doomed = []
    pred_ends = 0.0
    for u in graph.peers():
        d = graph.degree(u)
        p = targeted_probability(d, m, q)
        pred_ends += p * d
        if p > 0 and rng.random() < p:
            doomed.append(u)
    total = graph.degree_sum
    return _remove(graph, doomed, pred_ends / total if total else 0.0)


def attack_uniform(graph: Graph, fraction: float, seed=None) -> AttackReport:
    return attack_degree_targeted(graph, fraction, 0.0, seed)


def apply_attack(graph: Graph, spec: AttackSpec, seed=None) -> AttackReport:
    if spec.kind == TOP_DEGREE:
        return attack_top_degree(graph, spec.k0)
    if spec.kind == DEGREE_TARGETED:
        return attack_degree_targeted(graph, spec.m, spec.q, seed)
    return attack_uniform(graph, spec.fraction, seed)
