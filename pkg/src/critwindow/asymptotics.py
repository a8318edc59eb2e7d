"""Estimates and bounds for connected-graph counts with surplus.

Writing ``x = 1 + k/n``, the solution ``y = y(x)`` of ``x = artanh(y)/y``
drives the asymptotic formula

    C(n, n+k) ~ w_k binom(N, n+k) exp(n phi(x) + a(x)),   N = n(n-1)/2,

which is turned here into evaluable estimates and explicit upper bounds for
the sparse (``k <= n``) and dense (``k >= n/2``) parts of the surplus
generating function.  Internally ``y`` is parametrised as ``tanh(t)``, which
keeps ``1 - y`` accurate when ``y`` is within rounding of 1.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .errors import BoundHypothesisError
from .exact_counts import CountTable, binomial, default_table

__all__ = [
    "SurplusRatio",
    "T_PARAM",
    "a_func",
    "bcm_estimate",
    "calibrate_prop_constant",
    "crude_bound",
    "crude_bound_stirling",
    "dense_B",
    "dense_B_bound",
    "kk_series",
    "log_phi",
    "phi",
    "phi_bound",
    "prop_bound",
    "solve_surplus_ratio",
    "solve_y",
    "sparse_A",
    "sparse_A_bound",
    "sparse_A_series_bound",
    "sparse_constant",
    "surplus_upper",
]

T_PARAM = math.sqrt(3 * math.e)
A_AT_ONE = 2 + 0.5 * math.log(1.5)


@dataclass(frozen=True)
class SurplusRatio:
    """Solution of ``x = artanh(y) / y`` with ``t = artanh(y)`` and ``eta = 1 - y``."""

    x: float
    y: float
    t: float
    eta: float


def _t_coth_t(t: float) -> float:
    if t < 1e-3:
        t2 = t * t
        return 1 + t2 / 3 - t2 * t2 / 45 + 2 * t2**3 / 945
    return t / math.tanh(t)


def _solve_t(x: float) -> float:
    """Root of ``t coth(t) = x``; the left side is increasing and ``>= max(1, t)``."""
    if x == 1:
        return 0.0
    lo, hi = 0.0, x
    # series inversion ``t coth t ~ 1 + t^2/3`` gives the starting point near 1
    t = min(math.sqrt(3 * (x - 1)), x) if x < 1.5 else x
    for _ in range(200):
        f = _t_coth_t(t) - x
        if f > 0:
            hi = t
        else:
            lo = t
        if t < 1e-3:
            deriv = 2 * t / 3 - 4 * t**3 / 45
        else:
            sh = math.sinh(t) if t < 350 else math.inf
            deriv = 1 / math.tanh(t) - t / sh**2
        step_ok = deriv > 0
        t_new = t - f / deriv if step_ok else 0.5 * (lo + hi)
        if not (lo < t_new < hi):
            t_new = 0.5 * (lo + hi)
        if abs(t_new - t) <= 4e-16 * max(t, 1e-300) or hi - lo <= 4e-16 * hi:
            return t_new
        t = t_new
    return t


def solve_surplus_ratio(x: float) -> SurplusRatio:
    """Solve for ``y(x)`` together with the auxiliary ``t`` and ``1 - y``."""
    x = float(x)
    if not x >= 1:
        raise ValueError(f"x must be >= 1, got {x}")
    t = _solve_t(x)
    y = math.tanh(t)
    eta = 2.0 / (math.exp(2 * t) + 1) if t < 350 else 2.0 * math.exp(-2 * t)
    return SurplusRatio(x, y, t, eta)


def solve_y(x: float) -> float:
    """The unique ``y in [0, 1)`` with ``artanh(y) / y = x``; ``y(1) = 0``."""
    return solve_surplus_ratio(x).y


def _log_phi(r: SurplusRatio) -> float:
    if r.x == 1:
        return math.log(2) - 1
    # log 2 - x + (1-x) log y - 1/2 log(1 - y^2), with 1 - y^2 = sech^2 t
    log_y = math.log1p(-r.eta) if r.eta < 0.5 else math.log(r.y)
    log_cosh = r.t + math.log1p(math.exp(-2 * r.t)) - math.log(2)
    return math.log(2) - r.x + (1 - r.x) * log_y + log_cosh


def phi(x: float) -> float:
    """``exp(phi(x)) = 2 exp(-x) y^(1-x) / sqrt(1 - y^2)``; equals ``2/e`` at ``x = 1``."""
    return math.exp(_log_phi(solve_surplus_ratio(x)))


def log_phi(x: float) -> float:
    """``phi(x)`` itself (the logarithm of :func:`phi`)."""
    return _log_phi(solve_surplus_ratio(x))


def a_func(x: float) -> float:
    """``a(x) = x(x+1)(1-y) + log(1-x+xy) - log(1-x+xy^2)/2``, with ``a(1) = 2 + log(3/2)/2``."""
    r = solve_surplus_ratio(x)
    if r.x == 1:
        return A_AT_ONE
    d = r.x - 1
    if r.y < 0.5:
        lin = r.y - d * (1 - r.y)
        quad = r.y * r.y - d * (1 - r.y * r.y)
    else:
        lin = 1 - r.x * r.eta
        quad = 1 - r.x * r.eta * (2 - r.eta)
    if lin <= 0 or quad <= 0:
        raise ArithmeticError(f"nonpositive log argument at x={x}; y={r.y} inaccurate")
    return r.x * (r.x + 1) * r.eta + math.log(lin) - 0.5 * math.log(quad)


def phi_bound(x: float, t: float = T_PARAM) -> float:
    """Right-hand side ``(2/e) exp(-y^2 log(y/t) / 3)`` of the comparison bound for ``exp(phi)``."""
    y = solve_y(x)
    if y == 0:
        return 2 / math.e
    return 2 / math.e * math.exp(-(y * y) * math.log(y / t) / 3)


def _edges(n: int) -> int:
    return n * (n - 1) // 2


def bcm_estimate(n: int, k: int) -> mpmath.mpf:
    """Leading-order estimate ``binom(N, n+k) exp(n phi(x) + a(x))`` of ``C(n, n+k)`` with ``w_k = 1``."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    if not 0 <= k <= _edges(n) - n:
        raise ValueError(f"k must lie in [0, {_edges(n) - n}] for n={n}, got {k}")
    x = 1 + k / n
    return mpmath.mpf(binomial(_edges(n), n + k)) * mpmath.exp(n * log_phi(x) + a_func(x))


def _prop_form(n: int, k: int) -> mpmath.mpf:
    form = mpmath.mpf(binomial(_edges(n), n + k)) * (2 / mpmath.e) ** n
    if k > 0:
        form *= (mpmath.e * n / k) ** (mpmath.mpf(k) / 2)
    return form


def prop_bound(n: int, k: int, C_cal: float = 1.0) -> mpmath.mpf:
    """``C_cal binom(N, n+k) (2/e)^n (e n / k)^(k/2)``, with the ``k = 0`` factor taken as 1."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    if not 0 <= k <= n:
        raise BoundHypothesisError(f"bound holds for 0 <= k <= n, got k={k}, n={n}")
    return C_cal * _prop_form(n, k)


def calibrate_prop_constant(table: CountTable | None = None, n_min: int = 3, n_max: int = 40) -> tuple[float, tuple[int, int]]:
    """Largest ratio ``C(n, n+k) / prop_bound(n, k, 1)`` over the given range, and where it occurs."""
    table = table or default_table()
    best, where = 0.0, (n_min, 0)
    with mpmath.workprec(128):
        for n in range(n_min, n_max + 1):
            for k in range(0, n + 1):
                c = table.entry(n, n + k)
                if c == 0:
                    continue
                ratio = float(c / _prop_form(n, k))
                if ratio > best:
                    best, where = ratio, (n, k)
    return best, where


def crude_bound(n: int, k: int) -> int:
    """Total graph count ``binom(N, n+k)``, an upper bound for ``C(n, n+k)``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if k < -1:
        raise ValueError(f"k must be >= -1, got {k}")
    return binomial(_edges(n), n + k)


def crude_bound_stirling(n: int, k: int) -> Fraction:
    """The relaxation ``N^(n+k) / (n+k)!`` of :func:`crude_bound`."""
    if n < 2 or k < -1:
        raise ValueError("need n >= 2 and k >= -1")
    return Fraction(_edges(n) ** (n + k), math.factorial(n + k))


def kk_series(x, tol: float = 1e-30) -> mpmath.mpf:
    """``sum_{k >= 0} x^k / k^(k/2)`` with ``0^0 = 1``.

    Terms grow until ``k ~ x^2/e`` and then decay faster than geometrically;
    summation stops past the peak once a term drops below ``tol`` times the
    partial sum.
    """
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    x = mpmath.mpf(x)
    if x == 0:
        return mpmath.mpf(1)
    log_x = mpmath.log(x)
    peak = float(x * x / mpmath.e)
    total = mpmath.mpf(1)
    k = 1
    while True:
        term = mpmath.exp(k * log_x - k * mpmath.log(k) / 2)
        total += term
        if k > peak and term < tol * total:
            return total
        k += 1


def _as_number(z, exact: bool | None = None):
    """Keep ints and fractions exact; promote everything else to ``mpf``."""
    if exact is None:
        exact = isinstance(z, (int, Fraction))
    return Fraction(z) if exact else mpmath.mpf(z)


def sparse_A(n: int, z, table: CountTable | None = None):
    """Exact sparse part ``n^-(n-2) sum_{k=0}^{n} C(n, n+k) z^(k+1)``."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    table = table or default_table()
    z = _as_number(z)
    acc = 0
    for k in range(n, -1, -1):
        acc = acc * z + table.entry(n, n + k)
    return acc * z / _as_number(n ** (n - 2), exact=isinstance(z, Fraction))


def sparse_A_series_bound(n: int, z, C_cal: float) -> mpmath.mpf:
    """``C_cal (2 pi)^(-1/2) n^(3/2) z kk_series(e^(3/2) n^(3/2) z / 2)``, an upper bound for ``A(n, z)``.

    Valid wherever ``C(n, n+k) <= prop_bound(n, k, C_cal)`` for all ``k <= n``.
    """
    if z < 0:
        raise ValueError("z must be >= 0")
    n3 = mpmath.mpf(n) ** 1.5
    x = mpmath.e**1.5 * n3 * z / 2
    return C_cal / mpmath.sqrt(2 * mpmath.pi) * n3 * z * kk_series(x)


@functools.lru_cache(maxsize=32)
def sparse_constant(eps: float, C_cal: float) -> mpmath.mpf:
    """Constant ``C_eps`` such that ``sparse_A_series_bound <= C_eps exp((1/24 + eps) e t^2 z^2 n^3)``.

    With ``x = e^(3/2) n^(3/2) z / 2`` the exponent equals ``(1 + 24 eps) x^2 / (2e)``,
    so ``C_eps = C_cal (2 pi)^(-1/2) 2 e^(-3/2) sup_x x kk(x) exp(-(1 + 24 eps) x^2 / (2e))``.
    The supremum is located on a grid and refined by golden-section search.
    """
    if eps <= 0:
        raise ValueError("eps must be > 0")
    c = (1 + 24 * eps) / (2 * mpmath.e)

    def g(x):
        x = mpmath.mpf(x)
        return x * kk_series(x, tol=1e-20) * mpmath.exp(-c * x * x)

    x_peak = math.sqrt(math.e / (12 * eps))
    grid = np.linspace(0, 6 * x_peak + 10, 400)[1:]
    vals = [g(x) for x in grid]
    i = int(np.argmax([float(v) for v in vals]))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    inv_phi = (math.sqrt(5) - 1) / 2
    for _ in range(60):
        a = hi - inv_phi * (hi - lo)
        b = lo + inv_phi * (hi - lo)
        if g(a) > g(b):
            hi = b
        else:
            lo = a
    sup = max(g(0.5 * (lo + hi)), vals[i])
    return C_cal / mpmath.sqrt(2 * mpmath.pi) * 2 * mpmath.e ** (-1.5) * sup


def sparse_A_bound(n: int, z, eps: float, C_cal: float) -> mpmath.mpf:
    """``C_eps exp((1/24 + eps) e t^2 z^2 n^3)`` with ``t = sqrt(3e)``."""
    if n < 3 or z < 0:
        raise ValueError("need n >= 3 and z >= 0")
    expo = (mpmath.mpf(1) / 24 + eps) * mpmath.e * T_PARAM**2 * mpmath.mpf(z) ** 2 * mpmath.mpf(n) ** 3
    return sparse_constant(eps, C_cal) * mpmath.exp(expo)


def dense_B(n: int, z, table: CountTable | None = None):
    """Exact dense part ``n^-(n-2) sum_{k >= floor(n/2)} C(n, n+k) z^(k+1)``."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    table = table or default_table()
    z = _as_number(z)
    acc = 0
    for k in range(_edges(n) - n, n // 2 - 1, -1):
        acc = acc * z + table.entry(n, n + k)
    return acc * z ** (n // 2 + 1) / _as_number(n ** (n - 2), exact=isinstance(z, Fraction))


def _dense_constant(n: int) -> mpmath.mpf:
    return mpmath.e / 3 / mpmath.sqrt(2 * mpmath.pi) / (1 - 1 / mpmath.e) * mpmath.mpf(n) ** 2.5 * (mpmath.e / 3) ** n


def dense_B_bound(n: int, z, uniform: bool = False) -> mpmath.mpf:
    """Explicit ``K z^2`` bound on :func:`dense_B`, valid for ``z <= 3/(e n)``.

    ``K = (e/3) / (sqrt(2 pi) (1 - 1/e)) n^(5/2) (e/3)^n``: geometric ratio at
    most ``1/e``, Stirling's lower bound ``m! >= sqrt(2 pi m) (m/e)^m`` and
    ``(n-1)/(n + floor(n/2)) <= 2/3``.  With ``uniform`` the supremum of ``K``
    over ``n >= 3`` is used instead.
    """
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    if z < 0:
        raise ValueError("z must be >= 0")
    # compare in mpmath, allowing for the rounding of a double-precision input
    z = mpmath.mpf(z)
    if z > 3 / (mpmath.e * n) * (1 + 4 * mpmath.mpf(2) ** -52):
        raise BoundHypothesisError(f"dense bound needs z <= 3/(e n) = {3 / (math.e * n):.4g}, got {z}")
    if uniform:
        # n^(5/2) (e/3)^n peaks at n = 2.5 / log(3/e) ~ 25.3
        K = max(_dense_constant(m) for m in range(3, 60))
    else:
        K = _dense_constant(n)
    return K * mpmath.mpf(z) ** 2


def surplus_upper(n: int, z, eps: float, C_cal: float) -> mpmath.mpf:
    """``n^(n-2) (sparse_A_bound + dense_B_bound)``, an upper bound for the surplus generating function."""
    if z < 0:
        raise ValueError("z must be >= 0")
    return mpmath.mpf(n) ** (n - 2) * (sparse_A_bound(n, z, eps, C_cal) + dense_B_bound(n, z))
