"""Generating functions for trees and connected subgraphs of the complete graph.

Tree quantities are evaluated from their vertex-count expansions, e.g.

    chi^t_V(p) = sum_{n=1}^{V} binom(V-1, n-1) n^(n-1) (p/(eV))^(n-1),

term by term through the ratio ``t_{n+1} / t_n`` so that no factorial is ever
formed.  For large ``V`` the sums stop once an explicit Gaussian tail bound
(see :func:`tail_bound`) certifies that the omitted terms are negligible; the
bound travels with the result as a :class:`TailCertificate`.

Animal (connected subgraph) quantities add the surplus corrections computed
from the exact table of connected-graph counts, so they are limited to
``V <= table.n_max``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import mpmath

from .errors import BoundHypothesisError, CapacityError, PrecisionError
from .exact_counts import CountTable, default_table

__all__ = [
    "DEFAULT_PRECISION_BITS",
    "EXACT_THRESHOLD",
    "Real",
    "TailCertificate",
    "WindowPoint",
    "chi_animal",
    "chi_tree",
    "delta0",
    "delta_chi",
    "g01_animal",
    "g01_tree",
    "g0_animal",
    "g0_tree",
    "surplus_S",
    "tail_bound",
]

DEFAULT_PRECISION_BITS = 128
# sums with V above this are truncated with a certificate unless asked otherwise
EXACT_THRESHOLD = 10_000
DEFAULT_RTOL = 1e-12


def _context(precision_bits: int) -> mpmath.ctx_mp.MPContext:
    if precision_bits < 24:
        raise ValueError(f"precision_bits must be >= 24, got {precision_bits}")
    ctx = mpmath.MPContext()
    ctx.prec = precision_bits
    return ctx


@dataclass(frozen=True)
class WindowPoint:
    """A point ``(V, s)`` of the critical window; ``p = 1 + s / sqrt(V)``.

    Only ``V`` and ``s`` are stored, ``p`` is always derived.
    """

    V: int
    s: float | mpmath.mpf | int

    def __post_init__(self):
        if self.V < 1:
            raise ValueError(f"V must be >= 1, got {self.V}")
        if self.s < -math.sqrt(self.V) * (1 + 1e-15):
            raise ValueError(f"s={self.s} gives p < 0 at V={self.V}")

    @classmethod
    def from_p(cls, V: int, p) -> "WindowPoint":
        if p < 0:
            raise ValueError(f"p must be >= 0, got {p}")
        with mpmath.workprec(256):
            s = (mpmath.mpf(p) - 1) * mpmath.sqrt(V)
        return cls(V, s)

    @property
    def p(self) -> float:
        return 1.0 + float(self.s) / math.sqrt(self.V)


def _resolve(point, p, ctx):
    """Return ``(V, p, s)`` at the precision of ``ctx``.

    An explicit ``p`` is used as given, so ``p = 0`` stays exactly zero.
    """
    if isinstance(point, WindowPoint):
        if p is not None:
            raise TypeError("pass either a WindowPoint or (V, p), not both")
        V = point.V
        s = ctx.mpf(point.s)
        return V, 1 + s / ctx.sqrt(V), s
    if p is None:
        raise TypeError("p is required when V is given as an integer")
    V = int(point)
    if V < 1:
        raise ValueError(f"V must be >= 1, got {V}")
    if p < 0:
        raise ValueError(f"p must be >= 0, got {p}")
    p = ctx.mpf(p)
    return V, p, (p - 1) * ctx.sqrt(V)


@dataclass(frozen=True)
class TailCertificate:
    """Rigorous bound on the terms omitted after ``cutoff``.

    ``bound`` dominates ``sum_{n > cutoff} t_n``; the model inequality is
    ``t_n <= prefactor * n**-gamma * exp(-kappa n^2/V + lam n/sqrt(V))`` and
    ``b = (cutoff + 1) / sqrt(V)``.
    """

    cutoff: int
    bound: mpmath.mpf
    gamma: float
    kappa: float
    lam: mpmath.mpf
    b: mpmath.mpf
    prefactor: mpmath.mpf


@dataclass(frozen=True)
class Real:
    """Series value at declared precision, with optional truncation certificate."""

    value: mpmath.mpf
    precision_bits: int
    n_terms: int = 0
    certificate: TailCertificate | None = None

    def __float__(self) -> float:
        return float(self.value)

    @property
    def upper(self) -> mpmath.mpf:
        """Upper end of the bracket ``[value, value + tail bound]``."""
        if self.certificate is None:
            return self.value
        return self.value + self.certificate.bound


def tail_bound(gamma, kappa, lam, b, V: int, ctx=None) -> mpmath.mpf:
    """Explicit bound for ``sum_{n >= ceil(b sqrt V)} n^-gamma exp(-kappa n^2/V + lam n/sqrt V)``.

    Returns ``(b sqrt V)^-gamma * integral_{b sqrt V - 1}^inf exp(-kappa y^2/V + lam y/sqrt V) dy``
    with the integral in closed form::

        sqrt(V) * exp(lam^2/(4 kappa)) * sqrt(pi/kappa)/2 * erfc(sqrt(kappa) (L - lam/(2 kappa)))

    where ``L = b - 1/sqrt(V)``.

    Raises
    ------
    BoundHypothesisError
        If ``b sqrt(V) < 2`` or the summand is not decreasing on the
        integration range (``b sqrt V - 1 < lam sqrt V / (2 kappa)``).
    """
    ctx = ctx or mpmath.mp
    if gamma < 0 or kappa <= 0:
        raise ValueError("need gamma >= 0 and kappa > 0")
    gamma, kappa, lam, b = ctx.mpf(gamma), ctx.mpf(kappa), ctx.mpf(lam), ctx.mpf(b)
    root_v = ctx.sqrt(V)
    start = b * root_v
    if start < 2:
        raise BoundHypothesisError(f"b*sqrt(V) = {float(start):.4g} < 2")
    if start - 1 < lam * root_v / (2 * kappa):
        raise BoundHypothesisError(
            f"summand not decreasing beyond {float(start - 1):.4g}; increase b"
        )
    lower = b - 1 / root_v
    integral = (
        root_v
        * ctx.exp(lam**2 / (4 * kappa))
        * ctx.sqrt(ctx.pi / kappa)
        / 2
        * ctx.erfc(ctx.sqrt(kappa) * (lower - lam / (2 * kappa)))
    )
    return start ** (-gamma) * integral


def _positive_series(
    ctx,
    V: int,
    first: mpmath.mpf,
    ratio: Callable[[int], mpmath.mpf],
    n_start: int,
    truncate: bool,
    rtol: float,
    gamma: float,
    prefactor: mpmath.mpf,
    lam: mpmath.mpf,
    precision_bits: int,
    last: int | None = None,
) -> Real:
    """Sum ``t_{n_start} + ... + t_last`` (``last`` defaults to ``V``) from the ratio recurrence.

    With ``truncate`` the loop stops at the first checkpoint where the
    certified tail is below ``rtol`` times the partial sum.
    """
    kappa = ctx.mpf(1) / 2
    root_v = ctx.sqrt(V)
    stride = max(1, math.isqrt(V) // 16)
    n_min = max(2, int(ctx.ceil(lam * root_v / (2 * kappa))) + 1)
    term = first
    total = first
    n = n_start
    certificate = None
    last = V if last is None else last
    while n < last:
        if truncate and n >= n_min and n % stride == 0:
            b = (n + 1) / root_v
            bound = prefactor * tail_bound(gamma, kappa, lam, b, V, ctx)
            if bound <= rtol * total:
                certificate = TailCertificate(n, bound, gamma, 0.5, lam, b, prefactor)
                break
        term *= ratio(n)
        n += 1
        total += term
    n_terms = n - n_start + 1
    # positive terms: relative rounding error grows at most linearly in the term count
    rounding = n_terms * ctx.mpf(2) ** (4 - precision_bits)
    if rounding > rtol:
        raise PrecisionError(
            f"{n_terms} terms at {precision_bits} bits: relative rounding "
            f"bound {float(rounding):.3g} exceeds {rtol:g}"
        )
    return Real(total, precision_bits, n_terms, certificate)


def _tree_series(kind: str, point, p, precision_bits, truncate, rtol) -> Real:
    ctx = _context(precision_bits)
    V, p, s = _resolve(point, p, ctx)
    if kind == "g01" and V < 2:
        raise ValueError("two-point function needs V >= 2")
    if truncate is None:
        truncate = V > EXACT_THRESHOLD
    root_v = ctx.sqrt(V)
    p_over_e = p / ctx.e
    # t_n <= e/sqrt(2 pi n) exp(-s/sqrt V) exp(-n^2/(2V) + (s + 1/(2 sqrt V)) n/sqrt V)
    base_pref = ctx.e / ctx.sqrt(2 * ctx.pi) * ctx.exp(-s / root_v)
    lam = s + 1 / (2 * root_v)

    def growth(n, power):
        # (1 + 1/n)^power, the ratio of consecutive n^(n-1) or n^(n-2) factors
        return ctx.exp(power * ctx.log1p(ctx.mpf(1) / n))

    if kind == "chi":
        def ratio(n):
            return (1 - ctx.mpf(n) / V) * growth(n, n) * p_over_e
        first, n_start, gamma, pref = ctx.mpf(1), 1, 0.5, base_pref
    elif kind == "g0":
        def ratio(n):
            return (1 - ctx.mpf(n) / V) * growth(n, n - 1) * p_over_e
        first, n_start, gamma, pref = ctx.mpf(1), 1, 1.5, base_pref
    else:
        def ratio(n):
            return ctx.mpf(V - n) / (n - 1) * n * growth(n, n - 1) * p_over_e / V
        # n = 2 term: binom(V-2, 0) 2^0 (p/(eV))
        first, n_start, gamma, pref = p_over_e / V, 2, 0.5, base_pref / (V - 1)
    return _positive_series(
        ctx, V, first, ratio, n_start, truncate, rtol, gamma, pref, lam, precision_bits
    )


def g0_tree(point, p=None, *, precision_bits=DEFAULT_PRECISION_BITS, truncate=None, rtol=DEFAULT_RTOL) -> Real:
    """Tree one-point function ``G^t_{V,0}(p)``.

    Parameters
    ----------
    point : WindowPoint or int
        Window point, or the vertex count ``V`` when ``p`` is given.
    p : real, optional
        Explicit ``p >= 0``.
    truncate : bool, optional
        Force (``True``) or forbid (``False``) certified truncation.  The
        default truncates only when ``V > EXACT_THRESHOLD``.
    """
    return _tree_series("g0", point, p, precision_bits, truncate, rtol)


def g01_tree(point, p=None, *, precision_bits=DEFAULT_PRECISION_BITS, truncate=None, rtol=DEFAULT_RTOL) -> Real:
    """Tree two-point function ``G^t_{V,01}(p)``; needs ``V >= 2``."""
    return _tree_series("g01", point, p, precision_bits, truncate, rtol)


def chi_tree(point, p=None, *, precision_bits=DEFAULT_PRECISION_BITS, truncate=None, rtol=DEFAULT_RTOL) -> Real:
    """Tree susceptibility ``chi^t_V(p)``."""
    return _tree_series("chi", point, p, precision_bits, truncate, rtol)


def surplus_S(n: int, z, table: CountTable | None = None):
    """Surplus generating function ``S(n, z) = sum_{l >= 1} C(n, n-1+l) z^l``.

    Exact for ``int`` or ``Fraction`` arguments, otherwise evaluated in the
    type of ``z`` (``mpf`` or ``float``).
    """
    if n < 3:
        raise ValueError(f"surplus is identically zero for n < 3 (got n={n})")
    table = table or default_table()
    if n > table.n_max:
        raise CapacityError(f"n={n} exceeds table capacity {table.n_max}")
    coeffs = table.row(n)
    acc = 0
    for c in reversed(coeffs[1:]):
        acc = (acc + c) * z
    return acc


def _delta(point, p, table, precision_bits, with_n: bool) -> Real:
    ctx = _context(precision_bits)
    V, p, _ = _resolve(point, p, ctx)
    table = _animal_table(V, table)
    z = p / (ctx.e * V)
    total = ctx.mpf(0)
    for n in range(3, V + 1):
        term = math.comb(V - 1, n - 1) * surplus_S(n, z, table) * z ** (n - 1)
        total += n * term if with_n else term
    return Real(total, precision_bits, max(V - 2, 0))


def _animal_table(V: int, table: CountTable | None) -> CountTable:
    table = table or default_table()
    if V > table.n_max:
        raise CapacityError(
            f"animal quantities are exact only for V <= {table.n_max} (got V={V})"
        )
    return table


def delta0(point, p=None, table: CountTable | None = None, *, precision_bits=DEFAULT_PRECISION_BITS) -> Real:
    """Cycle correction ``Delta_{V,0} = G^a_{V,0} - G^t_{V,0}``."""
    return _delta(point, p, table, precision_bits, with_n=False)


def delta_chi(point, p=None, table: CountTable | None = None, *, precision_bits=DEFAULT_PRECISION_BITS) -> Real:
    """Cycle correction ``Delta_V = chi^a_V - chi^t_V``."""
    return _delta(point, p, table, precision_bits, with_n=True)


def g0_animal(point, p=None, table: CountTable | None = None, *, precision_bits=DEFAULT_PRECISION_BITS) -> Real:
    """Animal one-point function ``G^a_{V,0} = G^t_{V,0} + Delta_{V,0}``."""
    corr = delta0(point, p, table, precision_bits=precision_bits)
    tree = g0_tree(point, p, precision_bits=precision_bits, truncate=False)
    return Real(tree.value + corr.value, precision_bits, tree.n_terms)


def chi_animal(point, p=None, table: CountTable | None = None, *, precision_bits=DEFAULT_PRECISION_BITS) -> Real:
    """Animal susceptibility ``chi^a_V = chi^t_V + Delta_V``."""
    corr = delta_chi(point, p, table, precision_bits=precision_bits)
    tree = chi_tree(point, p, precision_bits=precision_bits, truncate=False)
    return Real(tree.value + corr.value, precision_bits, tree.n_terms)


def g01_animal(point, p=None, table: CountTable | None = None, *, precision_bits=DEFAULT_PRECISION_BITS) -> Real:
    """Animal two-point function ``(chi^a - G^a_0) / (V - 1)``."""
    chi = chi_animal(point, p, table, precision_bits=precision_bits)
    g0 = g0_animal(point, p, table, precision_bits=precision_bits)
    V = point.V if isinstance(point, WindowPoint) else int(point)
    if V < 2:
        raise ValueError("two-point function needs V >= 2")
    return Real((chi.value - g0.value) / (V - 1), precision_bits, chi.n_terms)
