"""Growth with preferential deletion, neighbor compensation and rejoin.

Each step one peer arrives with ``n`` preferential links.  Then, with
probability ``r``, a degree-proportionally chosen peer is deleted; each of
its former neighbors replaces the lost edge with one preferential edge, and
the deleted peer rejoins as a fresh peer with ``n`` preferential links.  The
peer count therefore grows by exactly one per step.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import InvalidParameterError
from .graph import Graph, as_random, attach_new_peer, component_census, seed_clique


@dataclass(frozen=True)
class ChurnSpec:
    n: int = 2
    r: float = 0.0
    steps: int = 50000
    seed: int | None = None
    sample_every: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameterError("n must be >= 1")
        if not 0 <= self.r <= 1:
            raise InvalidParameterError("r must lie in [0, 1]")
        if self.steps < 1:
            raise InvalidParameterError("steps must be >= 1")


@dataclass(frozen=True)
class ChurnResult:
    g: float
    final_peers: int
    final_edges: int
    deletions: int
    series: tuple[tuple[int, float], ...] = field(default=(), repr=False)

    def csv_row(self, spec: ChurnSpec) -> str:
        return f"{spec.r},{spec.n},{spec.steps},{spec.seed},{self.g!r},{self.final_peers}"


CSV_HEADER = "r,n,steps,seed,g,final_peers"


def largest_fraction(graph: Graph) -> float:
    if not graph.n_peers:
        return 0.0
    return component_census(graph).c_max / graph.n_peers


def churn_step(graph: Graph, n: int, r: float, rng: random.Random) -> bool:
    """Advance the overlay by one arrival (plus a possible deletion); return True if a peer was deleted."""
    attach_new_peer(graph, n, rng)
    if r <= 0 or rng.random() >= r:
        return False
    if not graph.n_edges:
        # every peer has zero preferential weight (only reachable with n=1)
        return False
    victim = graph.sample_preferential(rng)
    for v in graph.remove_peer(victim):
        graph.attach_preferential(v, 1, rng)
    attach_new_peer(graph, n, rng)
    return True


def run_churn(spec: ChurnSpec) -> ChurnResult:
    rng = as_random(spec.seed)
    graph = seed_clique(spec.n + 1)
    deletions = 0
    series = []
    for t in range(1, spec.steps + 1):
        deletions += churn_step(graph, spec.n, spec.r, rng)
        if spec.sample_every and t % spec.sample_every == 0:
            series.append((t, largest_fraction(graph)))
    return ChurnResult(largest_fraction(graph), graph.n_peers, graph.n_edges, deletions, tuple(series))
