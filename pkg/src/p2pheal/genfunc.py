"""Probability generating functions of attacked degree distributions.

Coefficients are stored densely for ``k = 0..d_max`` with the usual
positive-power convention ``F(x) = sum_k c_k x**k``.  An occupation model
gives each degree class a survival probability ``q_k``; the attacked
network is described by ``G0(x) = sum_k q_k p_k x**k`` and the excess-degree
function ``G1(x) = G0'(x) / G0'(1)``.

For ``q_k = m * k**-q`` on a ``k**-theta`` law the surviving mass decays
like ``k**-(theta + q)``.  Random power-law graphs lose their giant
component once the exponent exceeds ``BETA_C`` (Aiello, Chung and Lu
2000).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDistributionError, InvalidDistributionError, InvalidParameterError
from .graph import Graph, configuration_graph

# Aiello-Chung-Lu threshold for random power-law graphs; ~= root of zeta(b-2) = 2 zeta(b-1)
BETA_C = 3.4785

_NORM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GenFunc:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1:
            raise InvalidParameterError("coefficients must be one-dimensional")
        if np.any(c < 0):
            raise InvalidDistributionError("coefficients must be non-negative")
        if c.sum() > 1 + _NORM_TOL:
            raise InvalidDistributionError(f"coefficients sum to {c.sum()} > 1")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def d_max(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        # Horner on the reversed coefficients
        return np.polyval(self.coeffs[::-1], x)

    def derivative(self) -> "GenFunc":
        k = np.arange(1, len(self.coeffs))
        return _raw(k * self.coeffs[1:])

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("k,c_k\n")
            for k, c in enumerate(self.coeffs):
                fh.write(f"{k},{c!r}\n")


def _raw(coeffs) -> GenFunc:
    """Build a GenFunc skipping the probability-mass check (derivatives need not be sub-probabilities)."""
    g = GenFunc.__new__(GenFunc)
    c = np.asarray(coeffs, dtype=float)
    if c.size == 0:
        c = np.zeros(1)
    c.setflags(write=False)
    object.__setattr__(g, "coeffs", c)
    return g


@dataclass(frozen=True, eq=False)
class OccupationModel:
    """Survival probability per degree, ``q_of_k[k]`` for ``k = 0..d_max``."""

    q_of_k: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q_of_k, dtype=float)
        if np.any((q < 0) | (q > 1)):
            raise InvalidParameterError("occupation probabilities must lie in [0, 1]")
        q.setflags(write=False)
        object.__setattr__(self, "q_of_k", q)

    @classmethod
    def constant(cls, value: float, d_max: int) -> "OccupationModel":
        return cls(np.full(d_max + 1, float(value)))

    @classmethod
    def power(cls, m: float, q: float, d_max: int) -> "OccupationModel":
        """``q_k = min(1, m * k**-q)``; ``k = 0`` takes the ``k = 1`` value."""
        if m < 0 or q < 0:
            raise InvalidParameterError("need m >= 0 and q >= 0")
        k = np.maximum(np.arange(d_max + 1), 1).astype(float)
        return cls(np.minimum(1.0, m * k ** (-q)))

    def removal(self) -> np.ndarray:
        """Complementary per-degree attack probability ``1 - q_k``."""
        return 1.0 - self.q_of_k


@dataclass(frozen=True)
class CriterionResult:
    theta_effective: float | None
    beta_c: float
    giant_exists: bool | None
    molloy_reed_sum: float | None
    molloy_reed_giant: bool | None

    def as_dict(self) -> dict:
        return {
            "theta_effective": self.theta_effective,
            "beta_c": self.beta_c,
            "giant_exists": self.giant_exists,
            "molloy_reed_sum": self.molloy_reed_sum,
            "molloy_reed_giant": self.molloy_reed_giant,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)


def powerlaw_pk(theta: float, d_max: int, k_min: int = 1) -> np.ndarray:
    """Normalized ``p_k ~ k**-theta`` on ``[k_min, d_max]``, indexed from ``k = 0``."""
    p = np.zeros(d_max + 1)
    k = np.arange(k_min, d_max + 1, dtype=float)
    p[k_min:] = k ** (-theta)
    return p / p.sum()


def _check_distribution(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or np.any(p < 0):
        raise InvalidDistributionError("degree distribution must be a non-negative vector")
    if abs(p.sum() - 1.0) > _NORM_TOL:
        raise InvalidDistributionError(f"degree distribution sums to {p.sum()}, not 1")
    return p


def _occupied(p, occ: OccupationModel) -> np.ndarray:
    p = _check_distribution(p)
    q = occ.q_of_k
    n = max(len(p), len(q))
    pp = np.zeros(n)
    pp[: len(p)] = p
    qq = np.zeros(n)
    qq[: len(q)] = q
    return qq * pp


def g0_from(p, occ: OccupationModel) -> GenFunc:
    return GenFunc(_occupied(p, occ))


def g1_from(g0: GenFunc) -> GenFunc:
    d = g0.derivative()
    z = float(d.coeffs.sum())
    if z <= 0:
        raise DegenerateDistributionError("G0'(1) = 0: no edges survive")
    return GenFunc(d.coeffs / z)


def derivative_at_1(f: GenFunc, order: int = 1) -> float:
    """``sum_k k c_k`` for order 1, ``sum_k k (k - 1) c_k`` for order 2."""
    if order not in (1, 2):
        raise InvalidParameterError("order must be 1 or 2")
    k = np.arange(len(f.coeffs), dtype=float)
    w = k if order == 1 else k * (k - 1)
    # compensated sum: the weights grow like k**2, so plain dot loses digits
    return math.fsum(w * f.coeffs)


def giant_component_criterion(theta: float, q: float) -> CriterionResult:
    """Attack shifts the exponent to ``theta + q``; a giant survives iff that is strictly below ``BETA_C``."""
    if theta <= 0 or q < 0:
        raise InvalidParameterError("need theta > 0 and q >= 0")
    eff = float(theta) + float(q)
    return CriterionResult(eff, BETA_C, eff < BETA_C, None, None)


def molloy_reed_check(p, occ: OccupationModel) -> CriterionResult:
    c = _occupied(p, occ)
    k = np.arange(len(c), dtype=float)
    s = float(np.dot(k * (k - 2), c))
    return CriterionResult(None, BETA_C, None, s, s > 0)


def combined_criterion(theta: float, q: float, m: float = 1.0, d_max: int = 300) -> CriterionResult:
    """Both the exponent-shift test and the Molloy-Reed sum for a ``k**-theta`` law under ``min(1, m k**-q)``."""
    a = giant_component_criterion(theta, q)
    b = molloy_reed_check(powerlaw_pk(theta, d_max), OccupationModel.power(m, q, d_max))
    return CriterionResult(a.theta_effective, BETA_C, a.giant_exists, b.molloy_reed_sum, b.molloy_reed_giant)


def predicted_giant_fraction(g0: GenFunc, tol: float = 1e-13, max_iter: int = 100000) -> float:
    """Giant-component fraction of a configuration graph with degree law ``G0 / G0(1)``.

    Solves ``u = G1(u)`` by fixed-point iteration from ``u = 0`` and
    returns ``1 - G0(u) / G0(1)``.
    """
    total = float(g0.coeffs.sum())
    if total <= 0:
        return 0.0
    g1 = g1_from(g0)
    u = 0.0
    for _ in range(max_iter):
        nu = float(g1(u))
        if abs(nu - u) < tol:
            u = nu
            break
        u = nu
    return max(0.0, 1.0 - float(g0(u)) / total)


def sample_occupied_graph(g0: GenFunc, n_peers: int, seed=None) -> Graph:
    """Configuration graph whose degrees are drawn from the surviving law ``G0 / G0(1)``."""
    c = g0.coeffs
    total = c.sum()
    if total <= 0:
        raise DegenerateDistributionError("no surviving mass to sample from")
    rng = np.random.default_rng(seed)
    degrees = rng.choice(len(c), size=n_peers, p=c / total)
    return configuration_graph(degrees, rng)
