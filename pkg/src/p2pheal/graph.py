"""Undirected simple graph with O(1) degree-proportional sampling.

Every edge ``{u, v}`` is stored twice in a flat endpoint array, once as
``(u, v)`` and once as ``(v, u)``.  Drawing a uniform slot of that array
returns peer ``o`` with probability ``d(o) / sum_i d(i)``.  Each peer keeps a
``neighbor -> slot`` map so an edge can be removed by swap-with-last in
constant time.
"""
from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .errors import EmptyGraphError, InvalidParameterError

_MAX_RETRIES = 64


def as_random(seed) -> random.Random:
    """Return a ``random.Random`` for ``seed`` (int, None, or an existing instance)."""
    if isinstance(seed, random.Random):
        return seed
    if isinstance(seed, np.integer):
        seed = int(seed)
    return random.Random(seed)


class Graph:
    """Mutable undirected simple graph keyed by integer peer ids.

    Peer ids are never reused: ``add_peer`` always hands out a fresh id, so a
    deleted peer that rejoins the overlay is a new peer.
    """

    def __init__(self) -> None:
        self._adj: dict[int, dict[int, int]] = {}
        self._end_peer: list[int] = []
        self._end_other: list[int] = []
        self._next_id = 0

    # -- construction -----------------------------------------------------
    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], peers: Iterable[int] = ()) -> "Graph":
        g = cls()
        for p in peers:
            g.add_peer(int(p))
        for u, v in edges:
            u, v = int(u), int(v)
            if u not in g._adj:
                g.add_peer(u)
            if v not in g._adj:
                g.add_peer(v)
            g.add_edge(u, v)
        return g

    def copy(self) -> "Graph":
        g = Graph()
        g._adj = {u: dict(nb) for u, nb in self._adj.items()}
        g._end_peer = list(self._end_peer)
        g._end_other = list(self._end_other)
        g._next_id = self._next_id
        return g

    def add_peer(self, peer: int | None = None) -> int:
        if peer is None:
            peer = self._next_id
        elif peer in self._adj:
            raise InvalidParameterError(f"peer {peer} already exists")
        self._adj[peer] = {}
        self._next_id = max(self._next_id, peer + 1)
        return peer

    def add_edge(self, u: int, v: int) -> bool:
        """Insert ``{u, v}``; return False (and do nothing) for self-loops and duplicates."""
        if u == v:
            return False
        au = self._adj[u]
        if v in au:
            return False
        av = self._adj[v]
        i = len(self._end_peer)
        self._end_peer.append(u)
        self._end_other.append(v)
        self._end_peer.append(v)
        self._end_other.append(u)
        au[v] = i
        av[u] = i + 1
        return True

    def _drop_slot(self, i: int) -> None:
        last = len(self._end_peer) - 1
        if i != last:
            p = self._end_peer[last]
            o = self._end_other[last]
            self._end_peer[i] = p
            self._end_other[i] = o
            self._adj[p][o] = i
        self._end_peer.pop()
        self._end_other.pop()

    def remove_edge(self, u: int, v: int) -> None:
        iu = self._adj[u].pop(v)
        iv = self._adj[v].pop(u)
        # larger slot first so the smaller one cannot be the moved "last"
        if iu > iv:
            self._drop_slot(iu)
            self._drop_slot(iv)
        else:
            self._drop_slot(iv)
            self._drop_slot(iu)

    def remove_peer(self, peer: int) -> list[int]:
        """Delete ``peer`` and its edges; return its former neighbors (sorted)."""
        neighbors = sorted(self._adj[peer])
        for v in neighbors:
            self.remove_edge(peer, v)
        del self._adj[peer]
        return neighbors

    # -- queries ----------------------------------------------------------
    def __contains__(self, peer: int) -> bool:
        return peer in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def __iter__(self) -> Iterator[int]:
        return iter(self._adj)

    @property
    def n_peers(self) -> int:
        return len(self._adj)

    @property
    def n_edges(self) -> int:
        return len(self._end_peer) // 2

    @property
    def degree_sum(self) -> int:
        return len(self._end_peer)

    def peers(self) -> list[int]:
        return sorted(self._adj)

    def degree(self, peer: int) -> int:
        return len(self._adj[peer])

    def neighbors(self, peer: int) -> set[int]:
        return set(self._adj[peer])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def degrees(self) -> dict[int, int]:
        return {u: len(nb) for u, nb in self._adj.items()}

    def max_degree(self) -> int:
        return max((len(nb) for nb in self._adj.values()), default=0)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, sorted ascending."""
        return sorted((u, v) for u, nb in self._adj.items() for v in nb if u < v)

    def histogram(self) -> DegreeHistogram:
        return DegreeHistogram.from_degrees(len(nb) for nb in self._adj.values())

    def sample_preferential(self, rng: random.Random) -> int:
        ends = self._end_peer
        if not ends:
            raise EmptyGraphError("preferential sampling needs at least one edge")
        return ends[int(rng.random() * len(ends))]

    def attach_preferential(self, peer: int, count: int, rng: random.Random) -> int:
        """Add up to ``count`` edges from ``peer`` to degree-proportional targets.

        Self and duplicate targets are resampled a bounded number of times,
        then skipped.  Returns the number of edges actually added.
        """
        ends = self._end_peer
        adj_p = self._adj[peer]
        added = 0
        for _ in range(count):
            for _ in range(_MAX_RETRIES):
                if not ends:
                    return added
                t = ends[int(rng.random() * len(ends))]
                if t != peer and t not in adj_p:
                    self.add_edge(peer, t)
                    added += 1
                    break
        return added

    def audit(self) -> None:
        """Raise AssertionError unless all structural invariants hold."""
        assert len(self._end_peer) == len(self._end_other)
        total = 0
        for u, nb in self._adj.items():
            assert u not in nb, f"self-loop on {u}"
            for v, i in nb.items():
                assert self._end_peer[i] == u and self._end_other[i] == v
                assert u in self._adj[v]
            total += len(nb)
        assert total == len(self._end_peer) == 2 * self.n_edges

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return set(self._adj) == set(other._adj) and self.edges() == other.edges()

    def __repr__(self) -> str:
        return f"Graph(peers={self.n_peers}, edges={self.n_edges})"


@dataclass(frozen=True)
class DegreeHistogram:
    """Number of peers at each degree."""

    counts: dict[int, int]

    @classmethod
    def from_degrees(cls, degrees: Iterable[int]) -> "DegreeHistogram":
        return cls(dict(sorted(Counter(int(d) for d in degrees).items())))

    @property
    def n(self) -> int:
        return sum(self.counts.values())

    @property
    def d_max_observed(self) -> int:
        return max((k for k, c in self.counts.items() if c > 0), default=0)

    @property
    def degree_sum(self) -> int:
        return sum(k * c for k, c in self.counts.items())

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        ks = np.array(sorted(self.counts), dtype=np.int64)
        cs = np.array([self.counts[k] for k in ks], dtype=np.int64)
        return ks, cs

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("degree,count\n")
            for k, c in self.counts.items():
                fh.write(f"{k},{c}\n")

    @classmethod
    def from_csv(cls, path) -> "DegreeHistogram":
        counts = {}
        with open(path) as fh:
            next(fh)
            for line in fh:
                if line.strip():
                    k, c = line.split(",")
                    counts[int(k)] = int(c)
        return cls(dict(sorted(counts.items())))


@dataclass(frozen=True)
class ComponentCensus:
    sizes: tuple[int, ...]
    M: dict[int, float] = field(repr=False)
    mean_C: float
    mean_C2: float
    c_max: int

    @classmethod
    def from_sizes(cls, sizes: Iterable[int]) -> "ComponentCensus":
        sizes = tuple(sorted((int(s) for s in sizes), reverse=True))
        if not sizes:
            return cls((), {}, 0.0, 0.0, 0)
        n = len(sizes)
        counts = Counter(sizes)
        M = {k: counts[k] / n for k in sorted(counts)}
        arr = np.asarray(sizes, dtype=float)
        return cls(sizes, M, float(arr.mean()), float((arr * arr).mean()), sizes[0])

    @property
    def n_components(self) -> int:
        return len(self.sizes)

    @property
    def n_peers(self) -> int:
        return sum(self.sizes)


def components(graph: Graph) -> list[list[int]]:
    """Connected components as lists of peers, via breadth-first traversal."""
    adj = graph._adj
    seen: set[int] = set()
    out = []
    for s in adj:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    comp.append(v)
                    queue.append(v)
        out.append(comp)
    return out


def component_census(graph: Graph) -> ComponentCensus:
    return ComponentCensus.from_sizes(len(c) for c in components(graph))


def preferential_sample(graph: Graph, rng) -> int:
    """Draw a peer with probability proportional to its degree."""
    return graph.sample_preferential(as_random(rng))


def generate_preferential(n_peers: int, n: int, seed=None) -> Graph:
    """Grow a preferential-attachment graph from an ``(n+1)``-clique.

    Each arriving peer links to ``n`` distinct existing peers chosen with
    probability proportional to degree.
    """
    if n < 1 or n_peers <= n + 1:
        raise InvalidParameterError(f"need n >= 1 and n_peers > n + 1 (got n={n}, n_peers={n_peers})")
    rng = as_random(seed)
    g = seed_clique(n + 1)
    for _ in range(n_peers - (n + 1)):
        attach_new_peer(g, n, rng)
    return g


def seed_clique(size: int) -> Graph:
    g = Graph()
    for _ in range(size):
        g.add_peer()
    for u in range(size):
        for v in range(u + 1, size):
            g.add_edge(u, v)
    return g


def attach_new_peer(g: Graph, n: int, rng: random.Random) -> int:
    """Add a fresh peer linked to ``n`` distinct degree-proportional targets."""
    ends = g._end_peer
    targets: list[int] = []
    for _ in range(n):
        for _ in range(_MAX_RETRIES):
            if not ends:
                break
            t = ends[int(rng.random() * len(ends))]
            if t not in targets:
                targets.append(t)
                break
    peer = g.add_peer()
    for t in targets:
        g.add_edge(peer, t)
    return peer


def powerlaw_degree_weights(theta: float, d_cap: int, d_min: int = 1) -> tuple[np.ndarray, np.ndarray]:
    ks = np.arange(d_min, d_cap + 1)
    w = ks.astype(float) ** (-theta)
    return ks, w / w.sum()


def configuration_graph(degrees, seed=None) -> Graph:
    """Stub-match a degree sequence and project it onto a simple graph.

    Peer ``i`` gets ``degrees[i]`` stubs.  Stubs are shuffled and paired;
    self-loops and repeated pairs are discarded, and an odd leftover stub is
    dropped.  Realized degrees never exceed the targets.
    """
    degrees = np.asarray(degrees, dtype=np.int64)
    if degrees.size and degrees.min() < 0:
        raise InvalidParameterError("degrees must be non-negative")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(degrees.size), degrees)
    rng.shuffle(stubs)
    if stubs.size % 2:
        stubs = stubs[:-1]
    g = Graph()
    for i in range(degrees.size):
        g.add_peer(i)
    add = g.add_edge
    for u, v in zip(stubs[0::2].tolist(), stubs[1::2].tolist()):
        add(u, v)
    return g


def generate_powerlaw_config(theta: float, d_cap: int, n_peers: int, seed=None) -> Graph:
    """Configuration-model graph with target degrees drawn from ``k^-theta`` on ``[1, d_cap]``."""
    if theta <= 1 or d_cap < 1 or d_cap >= n_peers:
        raise InvalidParameterError(
            f"need theta > 1 and 1 <= d_cap < n_peers (got theta={theta}, d_cap={d_cap}, n_peers={n_peers})"
        )
    rng = np.random.default_rng(seed)
    ks, p = powerlaw_degree_weights(theta, d_cap)
    degrees = rng.choice(ks, size=n_peers, p=p)
    return configuration_graph(degrees, rng)


def write_edgelist(graph: Graph, path) -> None:
    """One ``u v`` pair per line (``u < v``), sorted; isolated peers as a lone ``u``."""
    with open(path, "w") as fh:
        for u, v in graph.edges():
            fh.write(f"{u} {v}\n")
        for u in graph.peers():
            if graph.degree(u) == 0:
                fh.write(f"{u}\n")


def read_edgelist(path) -> Graph:
    g = Graph()
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            try:
                ids = [int(x) for x in parts]
            except ValueError:
                raise InvalidParameterError(f"{path}:{lineno}: peer ids must be integers") from None
            if len(ids) > 2 or any(i < 0 for i in ids):
                raise InvalidParameterError(f"{path}:{lineno}: expected 'u v' with non-negative ids")
            for i in ids:
                if i not in g:
                    g.add_peer(i)
            if len(ids) == 2:
                g.add_edge(*ids)
    return g
