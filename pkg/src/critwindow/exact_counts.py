"""Exact counts of labelled trees and connected graphs on the complete graph.

All counts are plain Python integers, so arithmetic is exact.  The table of
connected-graph counts ``C(n, m)`` is built from the component-of-a-marked-vertex
recurrence

    C(n, m) = T(n, m) - sum_{j=1}^{n-1} binom(n-1, j-1) sum_i C(j, i) T(n-j, m-i),

with ``T(n, m) = binom(n(n-1)/2, m)``.  Each inner sum over ``i`` is a
polynomial product in the edge variable, which we evaluate with Kronecker
substitution: a polynomial with nonnegative coefficients below ``2**W`` is
packed into one big integer and multiplied by GMP.
"""
from __future__ import annotations

import functools
import itertools
import math

from gmpy2 import mpz

__all__ = [
    "CountTable",
    "binomial",
    "brute_force_connected",
    "cayley_count",
    "connected_count",
    "default_table",
    "total_graphs",
]

DEFAULT_N_MAX = 64
BRUTE_FORCE_N_MAX = 8


def cayley_count(n: int) -> int:
    """Number of labelled trees on ``n`` vertices, ``n**(n-2)``."""
    if n < 1:
        raise ValueError(f"cayley_count requires n >= 1, got {n}")
    if n <= 2:
        return 1
    return n ** (n - 2)


def binomial(a: int, b: int) -> int:
    """Exact binomial coefficient, zero outside ``0 <= b <= a``."""
    if a < 0:
        raise ValueError(f"binomial requires a >= 0, got {a}")
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def total_graphs(n: int, m: int) -> int:
    """Number of graphs (connected or not) on ``n`` labelled vertices with ``m`` edges."""
    if n < 1:
        raise ValueError(f"total_graphs requires n >= 1, got {n}")
    return binomial(n * (n - 1) // 2, m)


class CountTable:
    """Triangular table of connected-graph counts ``C(n, m)`` for ``n <= n_max``.

    Row ``n`` stores ``C(n, m)`` for ``n - 1 <= m <= n(n-1)/2`` (row 1 stores
    the single entry ``C(1, 0) = 1``).  The table is built once in the
    constructor and never mutated afterwards, so concurrent reads are safe.

    Parameters
    ----------
    n_max : int
        Largest vertex count held by the table.
    """

    def __init__(self, n_max: int = DEFAULT_N_MAX):
        if n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {n_max}")
        self.n_max = n_max
        self._rows: tuple[tuple[int, ...], ...] = _build_rows(n_max)

    def __repr__(self) -> str:
        return f"CountTable(n_max={self.n_max})"

    def _check(self, n: int) -> None:
        if n < 1:
            raise ValueError(f"vertex count must be >= 1, got {n}")
        if n > self.n_max:
            raise ValueError(f"n={n} exceeds table capacity n_max={self.n_max}")

    def entry(self, n: int, m: int) -> int:
        """Return ``C(n, m)``; zero outside the support."""
        self._check(n)
        lo = n - 1
        if m < lo or m > n * (n - 1) // 2:
            return 0
        return self._rows[n][m - lo]

    def row(self, n: int) -> tuple[int, ...]:
        """Counts ``C(n, n-1+l)`` indexed by the surplus ``l = 0, 1, ...``."""
        self._check(n)
        return self._rows[n]

    def connected_total(self, n: int) -> int:
        """Total number of connected labelled graphs on ``n`` vertices."""
        return sum(self.row(n))


def _build_rows(n_max: int) -> tuple[tuple[int, ...], ...]:
    n_edges_max = n_max * (n_max - 1) // 2
    # every coefficient that ever appears is bounded by binom(N, m) < 2**N
    width_bytes = n_edges_max // 8 + 2
    width = 8 * width_bytes
    one_edge = mpz(1) << width
    totals = [(1 + one_edge) ** (n * (n - 1) // 2) for n in range(n_max + 1)]
    packed = [mpz(0)] * (n_max + 1)
    rows: list[tuple[int, ...]] = [()]
    for n in range(1, n_max + 1):
        acc = totals[n]
        for j in range(1, n):
            acc -= math.comb(n - 1, j - 1) * packed[j] * totals[n - j]
        packed[n] = acc
        n_edges = n * (n - 1) // 2
        raw = int(acc).to_bytes((n_edges + 1) * width_bytes, "little")
        lo = n - 1
        rows.append(
            tuple(
                int.from_bytes(raw[m * width_bytes:(m + 1) * width_bytes], "little")
                for m in range(lo, n_edges + 1)
            )
        )
    return tuple(rows)


@functools.lru_cache(maxsize=4)
def default_table(n_max: int = DEFAULT_N_MAX) -> CountTable:
    """Shared, lazily built table (cached per ``n_max``)."""
    return CountTable(n_max)


def connected_count(n: int, m: int, table: CountTable | None = None) -> int:
    """Number of connected graphs on ``n`` labelled vertices with ``m`` edges."""
    if table is None:
        table = default_table(max(n, DEFAULT_N_MAX))
    return table.entry(n, m)


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def brute_force_connected(n: int, m: int) -> int:
    """Count ``m``-edge spanning connected subgraphs of ``K_n`` by enumeration.

    Independent of :class:`CountTable`; iterates all ``m``-subsets of the
    edge set and checks connectivity with union-find.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > BRUTE_FORCE_N_MAX:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_N_MAX}, got {n}")
    edges = list(itertools.combinations(range(n), 2))
    if m < 0 or m > len(edges):
        return 0
    if n == 1:
        return 1 if m == 0 else 0
    count = 0
    for subset in itertools.combinations(edges, m):
        parent = list(range(n))
        components = n
        for u, v in subset:
            ru, rv = _find(parent, u), _find(parent, v)
            if ru != rv:
                parent[ru] = rv
                components -= 1
        if components == 1:
            count += 1
    return count
