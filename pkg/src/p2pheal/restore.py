"""Reconnect a fragmented overlay by random stub matching between components.

A component of size ``k`` acts as a super-node with ``k`` stubs, one bound to
each of its member peers.  All stubs are matched uniformly at random, each
matched pair is kept with probability ``p``, and a kept pair becomes a real
edge between the two bound peers.  This is bond percolation on a
configuration model whose degree law is the component-size law, so a giant
component appears near ``<C> / (<C^2> - <C>)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptyGraphError, InvalidParameterError
from .graph import ComponentCensus, Graph, as_random, component_census, components

SWEEP_HEADER = "p,seed,edges_added,giant_fraction,qc_paper,qc_molloy_reed"


@dataclass(frozen=True)
class RestoreSpec:
    p: float
    seed: int | None = None

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise InvalidParameterError("p must lie in [0, 1]")


@dataclass(frozen=True)
class ThresholdEstimate:
    """Giant-component thresholds from component-size moments.

    ``qc_paper`` divides by the variance ``<C^2> - <C>^2``;
    ``qc_molloy_reed`` divides by ``<C^2> - <C>``, the configuration-model
    criterion.  A value is ``None`` when its denominator is not positive;
    ``*_feasible`` additionally requires the value to lie in ``(0, 1]``.
    """

    qc_paper: float | None
    qc_molloy_reed: float | None
    paper_feasible: bool
    molloy_reed_feasible: bool

    def as_dict(self) -> dict:
        return {
            "qc_paper": self.qc_paper,
            "qc_molloy_reed": self.qc_molloy_reed,
            "paper_feasible": self.paper_feasible,
            "molloy_reed_feasible": self.molloy_reed_feasible,
        }


@dataclass(frozen=True)
class RestoreReport:
    p: float
    matched_pairs: int
    kept_pairs: int
    edges_added: int
    skipped_self: int
    skipped_duplicate: int
    pre_census: ComponentCensus = field(repr=False)
    post_census: ComponentCensus = field(repr=False)
    threshold: ThresholdEstimate

    @property
    def giant_fraction(self) -> float:
        n = self.post_census.n_peers
        return self.post_census.c_max / n if n else 0.0

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "matched_pairs": self.matched_pairs,
            "kept_pairs": self.kept_pairs,
            "edges_added": self.edges_added,
            "skipped_self": self.skipped_self,
            "skipped_duplicate": self.skipped_duplicate,
            "pre_components": self.pre_census.n_components,
            "post_components": self.post_census.n_components,
            "pre_c_max": self.pre_census.c_max,
            "post_c_max": self.post_census.c_max,
            "giant_fraction": self.giant_fraction,
            **self.threshold.as_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)


def percolation_threshold(census: ComponentCensus) -> ThresholdEstimate:
    if not census.sizes:
        raise EmptyGraphError("threshold needs at least one component")
    c1, c2 = census.mean_C, census.mean_C2
    var = c2 - c1 * c1
    excess = c2 - c1
    # relative guard so exact-zero variance is not lost to rounding
    eps = 1e-12 * max(c2, 1.0)
    qp = c1 / var if var > eps else None
    qm = c1 / excess if excess > eps else None
    return ThresholdEstimate(qp, qm, qp is not None and qp <= 1, qm is not None and qm <= 1)


def giant_fraction(graph: Graph) -> float:
    if not graph.n_peers:
        return 0.0
    return component_census(graph).c_max / graph.n_peers


def restore_connect(graph: Graph, spec: RestoreSpec) -> RestoreReport:
    """One restore pass; mutates ``graph`` by adding edges only."""
    rng = as_random(spec.seed)
    comps = components(graph)
    pre = ComponentCensus.from_sizes(len(c) for c in comps)
    threshold = percolation_threshold(pre) if pre.sizes else ThresholdEstimate(None, None, False, False)
    # one stub per member peer; canonical order before shuffling keeps runs reproducible
    stubs = sorted(graph)
    rng.shuffle(stubs)
    matched = len(stubs) // 2
    kept = added = self_pairs = dup = 0
    for i in range(matched):
        u, v = stubs[2 * i], stubs[2 * i + 1]
        if spec.p < 1 and rng.random() >= spec.p:
            continue
        kept += 1
        if u == v:
            self_pairs += 1
        elif graph.add_edge(u, v):
            added += 1
        else:
            dup += 1
    return RestoreReport(spec.p, matched, kept, added, self_pairs, dup, pre, component_census(graph), threshold)


def fragmented_graph(sizes, seed=None) -> Graph:
    """Disjoint random recursive trees, one per entry of ``sizes``."""
    rng = as_random(seed)
    g = Graph()
    for k in sizes:
        k = int(k)
        if k < 1:
            raise InvalidParameterError("component sizes must be >= 1")
        first = g.add_peer()
        for j in range(1, k):
            u = g.add_peer()
            g.add_edge(u, first + int(rng.random() * j))
    return g


def powerlaw_sizes(exponent: float, k_max: int, n_components: int, seed=None, k_min: int = 1) -> np.ndarray:
    """Component sizes drawn i.i.d. from ``k**-exponent`` on ``[k_min, k_max]``."""
    rng = np.random.default_rng(seed)
    k = np.arange(k_min, k_max + 1)
    w = k.astype(float) ** (-exponent)
    return rng.choice(k, size=n_components, p=w / w.sum())


def sweep_rows(graph: Graph, ps, seeds) -> list[dict]:
    """Restore a fresh copy of ``graph`` for every ``(p, seed)``; one row per run."""
    rows = []
    for p in ps:
        for s in seeds:
            rep = restore_connect(graph.copy(), RestoreSpec(float(p), s))
            rows.append({
                "p": float(p),
                "seed": s,
                "edges_added": rep.edges_added,
                "giant_fraction": rep.giant_fraction,
                "qc_paper": rep.threshold.qc_paper,
                "qc_molloy_reed": rep.threshold.qc_molloy_reed,
            })
    return rows


def write_sweep_csv(rows, path) -> None:
    def fmt(x):
        return "" if x is None else repr(x) if isinstance(x, float) else str(x)

    lines = [SWEEP_HEADER] + [",".join(fmt(r[c]) for c in SWEEP_HEADER.split(",")) for r in rows]
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        Path(path).write_text(text)


def p_grid(step: float, lo: float = 0.0, hi: float = 1.0) -> list[float]:
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [round(lo + i * step, 10) for i in range(n + 1)]
