"""Independent reference implementations used only by the tests.

None of these share code with the package: subgraph sums are brute-force
enumerations, tree sums use closed-form binomials, the walk count is a
depth-first search and the excursion sampler is a discrete random walk.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np


def _components(vertices, edges):
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in edges:
        parent[find(u)] = find(v)
    return len({find(v) for v in vertices})


def subgraph_sums(V: int, x: Fraction, trees_only: bool) -> dict[str, Fraction]:
    """``G0``, ``G01`` and ``chi`` by enumerating every edge subset of ``K_V``."""
    edges = list(itertools.combinations(range(V), 2))
    g0 = Fraction(1)  # the single vertex {0}
    g0x = [Fraction(0)] * V
    g0x[0] = Fraction(1)
    for r in range(1, len(edges) + 1):
        for subset in itertools.combinations(edges, r):
            verts = sorted({v for e in subset for v in e})
            if 0 not in verts or _components(verts, subset) != 1:
                continue
            if trees_only and r != len(verts) - 1:
                continue
            w = x**r
            g0 += w
            for v in verts:
                g0x[v] += w
    return {"g0": g0, "g01": g0x[1], "chi": sum(g0x)}


def tree_sums_direct(V: int, x) -> dict:
    """Tree sums from Cayley counts: a tree on ``n`` labelled vertices through 0."""
    g0 = sum(math.comb(V - 1, n - 1) * cayley(n) * x ** (n - 1) for n in range(1, V + 1))
    chi = sum(math.comb(V - 1, n - 1) * n * cayley(n) * x ** (n - 1) for n in range(1, V + 1))
    g01 = sum(math.comb(V - 2, n - 2) * cayley(n) * x ** (n - 1) for n in range(2, V + 1))
    return {"g0": g0, "g01": g01, "chi": chi}


def cayley(n: int) -> int:
    return 1 if n <= 2 else n ** (n - 2)


def saw_count_dfs(V: int, n: int) -> int:
    """Self-avoiding ``n``-step walks from 0 to 1 on ``K_V`` by depth-first search."""

    def extend(path, steps_left):
        here = path[-1]
        if steps_left == 0:
            return int(here == 1)
        total = 0
        for w in range(V):
            if w == here or w in path:
                continue
            if w == 1 and steps_left > 1:
                continue
            total += extend(path + [w], steps_left - 1)
        return total

    return extend([0], n)


def profile_I_mpmath(s: float) -> mpmath.mpf:
    """Original integrand with its ``x^(-1/2)`` endpoint singularity, left to tanh-sinh quadrature."""
    with mpmath.workdps(30):
        f = lambda x: mpmath.exp(-x * x / 2 + s * x) / mpmath.sqrt(x)
        peak = max(s, 1)
        val = mpmath.quad(f, [0, peak, peak + 10, mpmath.inf])
        return mpmath.e / mpmath.sqrt(2 * mpmath.pi) * val


def profile_Ik_at_zero(k: float) -> float:
    """``int_0^inf x^k exp(-x^4/4) dx = 4^((k-3)/4) Gamma((k+1)/4)`` via ``t = x^4/4``."""
    return 4 ** ((k - 3) / 4) * math.gamma((k + 1) / 4)


def profile_Ik_series(k: float, s: float) -> mpmath.mpf:
    """Expand ``exp(-s x^2/2)`` and integrate termwise against ``x^k exp(-x^4/4)``.

    ``I_k(s) = sum_j (-s/2)^j / j! 4^((k+2j-3)/4) Gamma((k+2j+1)/4)``, an
    entire series; 60 digits absorb the cancellation for ``|s| <= 5``.
    """
    with mpmath.workdps(60):
        k, s = mpmath.mpf(k), mpmath.mpf(s)
        total, j = mpmath.mpf(0), 0
        while True:
            term = (-s / 2) ** j / mpmath.factorial(j) * mpmath.mpf(4) ** ((k + 2 * j - 3) / 4) * mpmath.gamma((k + 2 * j + 1) / 4)
            total += term
            if j > 10 and abs(term) < mpmath.mpf(10) ** -45 * abs(total):
                return total
            j += 1


def dyck_area_samples(n_paths: int, half_length: int, seed: int) -> np.ndarray:
    """Scaled areas of uniform Dyck paths of length ``2 * half_length``.

    A uniformly shuffled bridge of ``+1/-1`` steps is cyclically shifted to
    start after its first minimum (cycle lemma); the area under the result,
    scaled by ``(2 half_length)^(-3/2)``, converges to the excursion area.
    """
    rng = np.random.default_rng(seed)
    N = 2 * half_length
    base = np.r_[np.ones(half_length), -np.ones(half_length)]
    out = np.empty(n_paths)
    for i in range(n_paths):
        steps = rng.permutation(base)
        walk = np.cumsum(steps)
        k = int(np.argmin(walk))
        shifted = np.roll(steps, -(k + 1))
        out[i] = np.cumsum(shifted).sum() / N**1.5
    return out
