"""Monte Carlo for Erdos-Renyi percolation in the critical window ``p = 1 + s V^(-1/3)``.

The cluster of vertex 0 in ``G(V, p/V)`` is grown generation by generation:
if ``A`` vertices are active and ``U`` are still unexplored, the number of
unexplored vertices joined to at least one active vertex is
``Binomial(U, 1 - (1 - p/V)^A)``.  This reproduces the exact law of the
cluster without touching the ``O(V^2)`` edge set.  Vertex 1 is tracked
through exchangeability: when ``k`` of ``U`` unexplored vertices are found,
vertex 1 is among them with probability ``k / U``.

Replicas are processed in fixed-size blocks, each with its own counter-based
stream derived from ``(seed, block index)``, so the result never depends on
how blocks are scheduled.
"""
from __future__ import annotations

import functools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import interpolate, optimize

from .profiles import perc_profile

__all__ = [
    "BLOCK_SIZE",
    "MCEstimate",
    "ProfileFit",
    "block_rng",
    "estimate_chi_perc",
    "perc_p",
    "profile_fit",
    "sample_cluster",
    "sample_cluster_skip",
]

BLOCK_SIZE = 1024


@dataclass(frozen=True)
class MCEstimate:
    """Mean cluster size of vertex 0 with its standard error.

    ``tau_mean`` estimates the connection probability of vertices 0 and 1.
    """

    mean: float
    std_error: float
    replicas: int
    seed: int
    V: int
    s: float
    tau_mean: float = math.nan
    tau_se: float = math.nan


def perc_p(V: int, s: float) -> float:
    """``p = 1 + s V^(-1/3)``, the percolation window coordinate."""
    p = 1 + s * V ** (-1 / 3)
    if p < 0:
        raise ValueError(f"s={s} gives p < 0 at V={V}")
    return p


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Independent Philox stream for one block of replicas."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))


def _grow_block(V: int, q: float, n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Cluster sizes of vertex 0 and 0-1 connection flags for ``n`` replicas."""
    size = np.ones(n, dtype=np.int64)
    unexplored = np.full(n, V - 1, dtype=np.int64)
    active = np.ones(n, dtype=np.int64)
    hit_one = np.zeros(n, dtype=bool)
    log_miss = math.log1p(-q) if q < 1 else -math.inf
    live = np.arange(n)
    while live.size:
        a = active[live]
        u = unexplored[live]
        reach = -np.expm1(a * log_miss) if q < 1 else np.ones(live.size)
        found = rng.binomial(u, reach)
        # vertex 1 is a uniform member of the unexplored set until hit
        draw = rng.random(live.size)
        fresh = ~hit_one[live] & (u > 0)
        hit_one[live] |= fresh & (draw * np.maximum(u, 1) < found)
        size[live] += found
        unexplored[live] = u - found
        active[live] = found
        live = live[found > 0]
    return size, hit_one


def sample_cluster(V: int, p_over_V: float, rng: np.random.Generator) -> int:
    """Size of the cluster of vertex 0 in ``G(V, p_over_V)``."""
    if not 0 <= p_over_V <= 1:
        raise ValueError(f"edge probability must lie in [0, 1], got {p_over_V}")
    size, _ = _grow_block(V, p_over_V, 1, rng)
    return int(size[0])


def sample_cluster_skip(V: int, p_over_V: float, rng: np.random.Generator) -> tuple[int, bool]:
    """Reference sampler: explore vertex by vertex, skipping over absent edges.

    For each explored vertex the potential neighbours ``0..V-1`` are visited
    with geometric jumps of success probability ``p_over_V``, so every edge is
    decided at most once and the cost is ``O(|C| (1 + p))``.  Returns the
    cluster size and whether vertex 1 was reached.
    """
    if not 0 <= p_over_V <= 1:
        raise ValueError(f"edge probability must lie in [0, 1], got {p_over_V}")
    if p_over_V == 0:
        return 1, False
    visited = bytearray(V)
    visited[0] = 1
    stack = [0]
    size = 1
    while stack:
        stack.pop()
        w = -1
        while True:
            w += int(rng.geometric(p_over_V))
            if w >= V:
                break
            if not visited[w]:
                visited[w] = 1
                size += 1
                stack.append(w)
    return size, bool(visited[1]) if V > 1 else False


def _run_block(V: int, q: float, seed: int, block: int, n: int, sampler: str):
    rng = block_rng(seed, block)
    if sampler == "bfs":
        return _grow_block(V, q, n, rng)
    out = [sample_cluster_skip(V, q, rng) for _ in range(n)]
    return np.array([o[0] for o in out], dtype=np.int64), np.array([o[1] for o in out])


def estimate_chi_perc(
    V: int,
    s: float,
    replicas: int,
    seed: int,
    *,
    sampler: str = "bfs",
    threads: int = 1,
) -> MCEstimate:
    """Estimate ``chi^perc_V(1 + s V^(-1/3)) = E|C(0)|`` and ``tau_{V,01}``.

    Fixed ``(V, s, replicas, seed, sampler)`` reproduce the result bit for bit
    for any ``threads``: blocks have their own streams and are reduced in
    block order.  Different ``s`` with the same seed share streams (common
    random numbers).
    """
    if replicas < 1:
        raise ValueError(f"replicas must be >= 1, got {replicas}")
    if V < 2:
        raise ValueError(f"V must be >= 2, got {V}")
    if sampler not in ("bfs", "skip"):
        raise ValueError(f"sampler must be 'bfs' or 'skip', got {sampler!r}")
    q = min(perc_p(V, s) / V, 1.0)
    blocks = [(b, min(BLOCK_SIZE, replicas - b * BLOCK_SIZE)) for b in range(-(-replicas // BLOCK_SIZE))]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda bn: _run_block(V, q, seed, bn[0], bn[1], sampler), blocks))
    else:
        parts = [_run_block(V, q, seed, b, n, sampler) for b, n in blocks]
    sizes = np.concatenate([p[0] for p in parts]).astype(float)
    hits = np.concatenate([p[1] for p in parts]).astype(float)
    root_n = math.sqrt(replicas)
    se = float(sizes.std(ddof=1)) / root_n if replicas > 1 else math.nan
    tau_se = float(hits.std(ddof=1)) / root_n if replicas > 1 else math.nan
    return MCEstimate(float(sizes.mean()), se, replicas, seed, V, float(s), float(hits.mean()), tau_se)


@functools.lru_cache(maxsize=1)
def _log_profile_spline(lo: float = -12.0, hi: float = 8.0, step: float = 0.25):
    grid = np.arange(lo, hi + step / 2, step)
    values = np.log([perc_profile(float(s)).value for s in grid])
    return interpolate.CubicSpline(grid, values), (lo, hi)


def _profile_values(x: np.ndarray) -> np.ndarray:
    spline, (lo, hi) = _log_profile_spline()
    inside = (x >= lo) & (x <= hi)
    out = np.empty_like(x, dtype=float)
    out[inside] = np.exp(spline(x[inside]))
    for i in np.nonzero(~inside)[0]:
        out[i] = perc_profile(float(x[i])).value
    return out


@dataclass(frozen=True)
class ProfileFit:
    """Weighted least-squares fit of ``chi V^(-1/3) = b f_perc(a s)``.

    ``residual`` and ``constant_residual`` are weighted residual norms of the
    profile model and of an ``s``-independent constant, the nested baseline.
    """

    a: float
    b: float
    residual: float
    constant_residual: float
    n_points: int
    success: bool


def profile_fit(estimates: list[MCEstimate], a0: float = 1.0, b0: float = 1.0) -> ProfileFit:
    """Fit the scaling form to simulation data; reports, never judges."""
    s = np.array([e.s for e in estimates], dtype=float)
    V = np.array([e.V for e in estimates], dtype=float)
    if len(set(s)) < 3 or len(set(V)) < 2:
        raise ValueError("profile_fit needs >= 3 distinct s values and >= 2 distinct V")
    scale = V ** (-1 / 3)
    y = np.array([e.mean for e in estimates]) * scale
    err = np.array([e.std_error for e in estimates]) * scale
    if not np.all(np.isfinite(err)) or np.any(err <= 0):
        err = np.full_like(y, max(float(np.std(y)), 1e-12))

    def resid(theta):
        a, b = theta
        return (b * _profile_values(a * s) - y) / err

    fit = optimize.least_squares(resid, x0=[a0, b0], bounds=([1e-3, 1e-6], [10.0, np.inf]), x_scale="jac")
    wmean = np.sum(y / err**2) / np.sum(1 / err**2)
    constant = float(np.linalg.norm((y - wmean) / err))
    return ProfileFit(float(fit.x[0]), float(fit.x[1]), float(np.linalg.norm(fit.fun)), constant, len(y), bool(fit.success))
