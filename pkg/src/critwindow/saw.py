"""Self-avoiding walk on the complete graph.

An ``n``-step walk from 0 to 1 picks its ``n - 1`` intermediate vertices in
order from the ``V - 2`` others, so the walk count is ``prod_{j=2}^n (V - j)``.
The two-point sum ``S_{V,01}(p) = sum_n c_{V,n} (p/V)^n`` is evaluated with the
same ratio recurrence and certified truncation as the tree series.
"""
from __future__ import annotations

import math
import dataclasses

from .genfun import (
    DEFAULT_PRECISION_BITS,
    DEFAULT_RTOL,
    EXACT_THRESHOLD,
    Real,
    _context,
    _positive_series,
    _resolve,
)

__all__ = ["saw_chi", "saw_two_point", "saw_walk_count"]


def saw_walk_count(V: int, n: int) -> int:
    """Number of ``n``-step self-avoiding walks from 0 to 1 on ``K_V``."""
    if V < 2:
        raise ValueError(f"V must be >= 2, got {V}")
    if not 1 <= n <= V - 1:
        raise ValueError(f"need 1 <= n <= V-1 = {V - 1}, got n={n}")
    return math.prod(range(V - n, V - 1))


def saw_two_point(point, p=None, *, precision_bits=DEFAULT_PRECISION_BITS, truncate=None, rtol=DEFAULT_RTOL) -> Real:
    """``S_{V,01}(p) = sum_{n=1}^{V-1} c_{V,n}(0,1) (p/V)^n``.

    Accepts a :class:`~critwindow.genfun.WindowPoint` or ``(V, p)``, like the
    tree functions.
    """
    ctx = _context(precision_bits)
    V, p, s = _resolve(point, p, ctx)
    if V < 2:
        raise ValueError(f"V must be >= 2, got {V}")
    if truncate is None:
        truncate = V > EXACT_THRESHOLD
    if p == 0:
        return Real(ctx.mpf(0), precision_bits, 1)
    root_v = ctx.sqrt(V)
    p_over_v = p / V

    def ratio(n):
        return (V - n - 1) * p_over_v

    # t_n <= (p/V) e^(1/V - s/sqrt V) exp(-n^2/(2V) + (s - 1/(2 sqrt V)) n/sqrt V)
    pref = p_over_v * ctx.exp(ctx.mpf(1) / V - s / root_v)
    lam = s - 1 / (2 * root_v)
    return _positive_series(
        ctx, V, p_over_v, ratio, 1, truncate, rtol, 0.0, pref, lam, precision_bits, last=V - 1
    )


def saw_chi(point, p=None, *, precision_bits=DEFAULT_PRECISION_BITS, truncate=None, rtol=DEFAULT_RTOL) -> Real:
    """``chi^SAW_V(p) = 1 + (V-1) S_{V,01}(p)``."""
    two = saw_two_point(point, p, precision_bits=precision_bits, truncate=truncate, rtol=rtol)
    ctx = _context(precision_bits)
    V = point.V if hasattr(point, "V") else int(point)
    certificate = two.certificate
    if certificate is not None:
        certificate = dataclasses.replace(
            certificate, bound=certificate.bound * (V - 1), prefactor=certificate.prefactor * (V - 1)
        )
    return Real(1 + (V - 1) * ctx.mpf(two.value), precision_bits, two.n_terms, certificate)
