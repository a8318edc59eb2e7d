"""Scaling profiles of the critical window.

All profiles are positive integrals over ``[0, inf)``.  Integrable endpoint
singularities are removed by substitution (``x = u^2`` for ``x^(-1/2)``,
``x = u^(1/(k+1))`` on ``[0, 1]`` for ``x^k`` with ``k < 0``), and every
integrand is rescaled by its maximum before quadrature so that relative
accuracy survives values like ``I(8) ~ 1e13``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable

import mpmath
import numpy as np
from scipy import integrate, optimize

from .errors import ConvergenceError

__all__ = [
    "ProfileEval",
    "asymptotic_I",
    "excursion_area_mc",
    "excursion_log_coefficients",
    "excursion_mgf",
    "excursion_moment",
    "lambert_w0",
    "one_point_series",
    "perc_profile",
    "profile_I",
    "profile_Ik",
    "spin_profile_fn",
    "tree_one_point_limit",
]

_EPS = np.finfo(float).eps
_INV_E = math.exp(-1)


@dataclass(frozen=True)
class ProfileEval:
    s: float
    value: float
    method: str
    est_abs_error: float

    def __float__(self) -> float:
        return self.value


def _quad_scaled(log_f: Callable[[float], float], peak: float, width: float, lower: float, upper: float, tol: float) -> tuple[float, float]:
    """Integrate ``exp(log_f)`` over ``[lower, upper]`` with breakpoints around ``peak``.

    Returns ``(value, error)``; the error adds the quadrature estimate and a
    rounding floor.
    """
    log_max = log_f(peak)

    def f(x):
        return math.exp(log_f(x) - log_max)

    pts = sorted({lower, upper, *[
        min(max(peak + c * width, lower), upper) for c in (-12, -4, -1, 0, 1, 4, 12)
    ]})
    total = err = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        if b <= a:
            continue
        val, e = integrate.quad(f, a, b, epsabs=tol * 1e-3, epsrel=1e-13, limit=200)
        total += val
        err += e
    scale = math.exp(log_max)
    err += 8 * _EPS * total * len(pts)
    return total * scale, float(err * scale)


def _quad_tail(log_f, start: float, tol: float) -> tuple[float, float]:
    log_start = log_f(start)

    def f(x):
        return math.exp(log_f(x) - log_start)

    val, e = integrate.quad(f, start, math.inf, epsabs=tol * 1e-3, epsrel=1e-13, limit=200)
    scale = math.exp(log_start)
    return val * scale, float((e + 8 * _EPS * val) * scale)


def profile_I(s: float, tol: float = 1e-10) -> ProfileEval:
    """``I(s) = e / sqrt(2 pi) * int_0^inf exp(-x^2/2 + s x) x^(-1/2) dx``.

    Evaluated as ``2 e / sqrt(2 pi) * int_0^inf exp(-u^4/2 + s u^2) du``.
    """
    s = float(s)

    def log_f(u):
        return -0.5 * u**4 + s * u * u

    peak = math.sqrt(s) if s > 0 else 0.0
    width = 1 / math.sqrt(2 * abs(s) + 1)
    head, e1 = _quad_scaled(log_f, peak, width, 0.0, peak + 12 * width, tol)
    tail, e2 = _quad_tail(log_f, peak + 12 * width, tol)
    const = 2 * math.e / math.sqrt(2 * math.pi)
    value, err = const * (head + tail), const * (e1 + e2)
    if err > max(tol, tol * value):
        raise ConvergenceError(f"I({s}) error estimate {err:.3g} above tolerance {tol:g}")
    return ProfileEval(s, value, "quadrature", err)


def profile_Ik(k: float, s: float, tol: float = 1e-10) -> ProfileEval:
    """``I_k(s) = int_0^inf x^k exp(-x^4/4 - s x^2/2) dx`` for real ``k > -1``."""
    k, s = float(k), float(s)
    if not k > -1:
        raise ValueError(f"I_k needs k > -1, got {k}")

    def log_f(x):
        return (k * math.log(x) if k else 0.0) - 0.25 * x**4 - 0.5 * s * x * x

    # stationary point of the log-integrand: x^4 + s x^2 - k = 0
    if k >= 0:
        if k == 0:
            x2 = max(-s, 0.0)
        elif s > 0:
            # same root without cancellation
            x2 = 2 * k / (s + math.sqrt(s * s + 4 * k))
        else:
            x2 = (-s + math.sqrt(s * s + 4 * k)) / 2
        peak = math.sqrt(x2)
    else:
        peak = 0.0
    width = 1 / math.sqrt(abs(s) + 2 * math.sqrt(abs(k)) + 1)
    if k < 0:
        # x = u^(1/(k+1)) on [0, 1] turns x^k dx into du / (k+1)
        inv = 1 / (k + 1)

        def g(u):
            if u == 0:
                return 1.0
            x = u**inv
            return math.exp(-0.25 * x**4 - 0.5 * s * x * x)

        head, e_head = integrate.quad(g, 0, 1, epsabs=tol * 1e-3, epsrel=1e-13, limit=200)
        head *= inv
        e_head = float((e_head + 8 * _EPS * head) * inv)
        lower = 1.0
        peak = max(peak, 1.0)
    else:
        head = e_head = 0.0
        lower = 0.0
    upper = peak + 12 * width
    mid, e_mid = _quad_scaled(log_f, peak, width, lower, upper, tol)
    tail, e_tail = _quad_tail(log_f, upper, tol)
    value, err = head + mid + tail, e_head + e_mid + e_tail
    if err > max(tol, tol * value):
        raise ConvergenceError(f"I_{k}({s}) error estimate {err:.3g} above tolerance {tol:g}")
    return ProfileEval(s, value, "quadrature", err)


def asymptotic_I(s: float, branch: str) -> float:
    """Leading asymptotics of ``I``: ``e |2s|^(-1/2)`` as ``s -> -inf``, ``e s^(-1/2) e^(s^2/2)`` as ``s -> +inf``."""
    if abs(s) < 1:
        raise ValueError(f"asymptotic form needs |s| >= 1, got {s}")
    if branch == "minus":
        if s > 0:
            raise ValueError("minus branch needs s <= -1")
        return math.e / math.sqrt(2 * abs(s))
    if branch == "plus":
        if s < 0:
            raise ValueError("plus branch needs s >= 1")
        return math.e / math.sqrt(s) * math.exp(s * s / 2)
    raise ValueError(f"branch must be 'minus' or 'plus', got {branch!r}")


def _lambert_series(z: float) -> float:
    # sum_{n>=1} (-n)^(n-1) z^n / n!  via  t_{n+1}/t_n = -z (1 + 1/n)^(n-1)
    term = z
    total = z
    n = 1
    while abs(term) > 1e-18 * abs(total) and n < 200:
        term *= -z * (1 + 1 / n) ** (n - 1)
        n += 1
        total += term
    return total


def lambert_w0(z: float) -> float:
    """Principal branch ``W0`` of the Lambert function for real ``z >= -1/e``.

    Uses the power series for ``|z| <= 0.2``, the branch-point expansion as a
    start near ``-1/e``, and Halley iteration elsewhere.
    """
    z = float(z)
    if math.isnan(z):
        raise ValueError("z is NaN")
    if z == 0:
        return 0.0
    with mpmath.workprec(113):
        # 1 + e z near the branch point loses all digits in double precision
        q = float(1 + mpmath.e * mpmath.mpf(z))
    if q < 0:
        if q > -4 * _EPS:
            return -1.0
        raise ValueError(f"W0 is real only for z >= -1/e, got {z}")
    if q <= 4 * _EPS or z == -_INV_E:
        return -1.0
    if abs(z) <= 0.2:
        return _lambert_series(z)
    if z < -0.25:
        p = math.sqrt(2 * q)
        w = -1 + p - p * p / 3 + 11 / 72 * p**3 - 43 / 540 * p**4
    elif z < 3:
        w = math.log1p(z) * (1 - math.log1p(math.log1p(z)) / (2 + math.log1p(z)))
    else:
        l1 = math.log(z)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - z
        w1 = w + 1
        if w1 == 0:
            break
        dw = f / (ew * w1 - (w + 2) * f / (2 * w1))
        w -= dw
        if abs(dw) <= 2 * _EPS * (1 + abs(w)):
            break
    return w


def tree_one_point_limit(p: float) -> float:
    """``-(e/p) W0(-p/e)``, the large-``V`` limit of the one-point function; 1 at ``p = 0``."""
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if p == 0:
        return 1.0
    return -(math.e / p) * lambert_w0(-p / math.e)


@functools.lru_cache(maxsize=1)
def _stirling_tail_coefficients(order: int = 12) -> tuple[mpmath.mpf, ...]:
    """Coefficients ``c_j`` with ``n^(n-1) e^(1-n) / n! ~ e/sqrt(2 pi) n^(-3/2) sum_j c_j n^(-j)``."""
    g = [mpmath.mpf(0)] * (order + 1)
    for k in range(1, order // 2 + 2):
        if 2 * k - 1 <= order:
            g[2 * k - 1] = -mpmath.bernoulli(2 * k) / (2 * k * (2 * k - 1))
    c = [mpmath.mpf(1)] + [mpmath.mpf(0)] * order
    for j in range(1, order + 1):
        c[j] = mpmath.fsum(i * g[i] * c[j - i] for i in range(1, j + 1)) / j
    return tuple(c)


def one_point_series(p: float, n_direct: int = 400) -> float:
    """``sum_{n >= 1} n^(n-1)/n! (p/e)^(n-1)`` by direct summation plus an asymptotic tail.

    Independent of :func:`lambert_w0`: terms ``n <= n_direct`` are summed
    exactly, and the remainder uses the Stirling expansion of the terms with
    Lerch transcendents ``sum_{n > N} p^(n-1) n^(-3/2-j)``, which stay valid at
    ``p = 1`` where the series converges only algebraically.
    """
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    with mpmath.workprec(120):
        p = mpmath.mpf(p)
        if p == 0:
            return 1.0
        head = mpmath.fsum(
            mpmath.exp((n - 1) * (mpmath.log(n) + mpmath.log(p) - 1) - mpmath.loggamma(n + 1))
            for n in range(1, n_direct + 1)
        )
        coeffs = _stirling_tail_coefficients()
        tail = mpmath.fsum(
            c * mpmath.lerchphi(p, mpmath.mpf(3) / 2 + j, n_direct + 1)
            for j, c in enumerate(coeffs)
        )
        tail *= mpmath.e / mpmath.sqrt(2 * mpmath.pi) * p**n_direct
        return float(head + tail)


def spin_profile_fn(n: float, s: float, tol: float = 1e-10) -> float:
    """``f_n(s) = I_{n+1}(s) / (n I_{n-1}(s))``; ``n`` may be any positive real."""
    if not n > 0:
        raise ValueError(f"n must be > 0, got {n}")
    return profile_Ik(n + 1, s, tol).value / (n * profile_Ik(n - 1, s, tol).value)


@functools.lru_cache(maxsize=4)
def _excursion_moments(count: int) -> tuple[mpmath.mpf, ...]:
    """Brownian excursion area moments ``E[B^k]``, ``k < count``.

    ``K_0 = -1/2``, ``K_k = (3k-4)/4 K_{k-1} + sum_{j=1}^{k-1} K_j K_{k-j}`` and
    ``E[B^k] = 4 sqrt(pi) 2^(-k/2) k! K_k / Gamma((3k-1)/2)``.
    """
    with mpmath.workprec(96):
        K = [mpmath.mpf(-1) / 2]
        for k in range(1, count):
            conv = mpmath.fsum(K[j] * K[k - j] for j in range(1, k))
            K.append(mpmath.mpf(3 * k - 4) / 4 * K[k - 1] + conv)
        root_pi = mpmath.sqrt(mpmath.pi)
        return tuple(
            4 * root_pi * mpmath.mpf(2) ** (-mpmath.mpf(k) / 2) * mpmath.factorial(k)
            * K[k] / mpmath.gamma(mpmath.mpf(3 * k - 1) / 2)
            for k in range(count)
        )


def excursion_moment(k: int) -> mpmath.mpf:
    """``E[(int_0^1 e(t) dt)^k]`` for the standard Brownian excursion ``e``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return _excursion_moments(_moment_budget(k + 1))[k]


def _moment_budget(count: int) -> int:
    size = 64
    while size < count:
        size *= 2
    return size


@functools.lru_cache(maxsize=4)
def excursion_log_coefficients(count: int = 2048) -> np.ndarray:
    """``log(E[B^k] / k!)`` for ``k < count`` as a float array."""
    moments = _excursion_moments(count)
    with mpmath.workprec(96):
        return np.array([float(mpmath.log(m / mpmath.factorial(k))) for k, m in enumerate(moments)])


def excursion_mgf(x: float, K: int | None = None, rtol: float = 1e-12, max_terms: int = 2048) -> float:
    """``Psi(x) = E exp(x B)`` for the excursion area ``B``, by its moment series.

    With ``K=None`` terms are added until the last one falls below ``rtol`` of
    the partial sum (past the largest term); otherwise exactly ``K + 1`` terms
    are summed.

    Raises
    ------
    ConvergenceError
        If ``max_terms`` terms do not reach ``rtol``.
    """
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if x == 0:
        return 1.0
    log_c = excursion_log_coefficients(max_terms)
    k = np.arange(len(log_c))
    log_terms = log_c + k * math.log(x)
    if K is not None:
        if K >= max_terms:
            raise ValueError(f"K must be < max_terms={max_terms}")
        return float(np.exp(np.logaddexp.reduce(log_terms[: K + 1])))
    running = np.logaddexp.accumulate(log_terms)
    peak = int(np.argmax(log_terms))
    done = np.nonzero((k > peak) & (log_terms - running < math.log(rtol)))[0]
    if done.size == 0:
        raise ConvergenceError(f"Psi({x}) not converged within {max_terms} terms")
    return float(np.exp(running[done[0]]))


def _log_psi(y: float, log_c: np.ndarray) -> float:
    if y == 0:
        return 0.0
    return float(np.logaddexp.reduce(log_c + np.arange(len(log_c)) * math.log(y)))


def _perc_log_integrand(s: float, log_c: np.ndarray):
    const = math.log(2 / math.sqrt(2 * math.pi))

    def log_f(u):
        u2 = u * u
        return const + _log_psi(u2 * u, log_c) - u2**3 / 6 + s * u2 * u2 / 2 - s * s * u2 / 2

    return log_f


def perc_profile(s: float, method: str = "quad", tol: float = 1e-10) -> ProfileEval:
    """``f_perc(s) = int_0^inf x^2 dsigma_s`` with the excursion-area intensity ``sigma_s``.

    With ``x = u^2`` the integrand becomes
    ``2/sqrt(2 pi) Psi(u^3) exp(-u^6/6 + s u^4/2 - s^2 u^2/2)``.  Two schemes are
    available: adaptive quadrature (``"quad"``) and composite Gauss-Legendre
    (``"gauss"``); both truncate where the integrand is 1e-17 of its peak.
    """
    s = float(s)
    log_c = excursion_log_coefficients()
    log_f = _perc_log_integrand(s, log_c)
    grid = np.linspace(0, 6 + 2 * math.sqrt(abs(s)), 600)
    vals = np.array([log_f(u) for u in grid])
    i = int(np.argmax(vals))
    if 0 < i < len(grid) - 1:
        res = optimize.minimize_scalar(lambda u: -log_f(u), bracket=(grid[i - 1], grid[i], grid[i + 1]))
        peak = float(res.x)
    else:
        peak = float(grid[i])
    log_peak = log_f(peak)
    # upper cutoff: log-integrand has fallen by 40 (~1e-17) beyond the peak
    upper = peak + 1.0
    while log_f(upper) > log_peak - 40:
        upper += 0.5
    if method == "quad":
        width = 0.25
        value, err = _quad_scaled(log_f, peak, width, 0.0, upper, tol)
        return ProfileEval(s, value, "quadrature", err)
    if method == "gauss":
        nodes, weights = np.polynomial.legendre.leggauss(64)
        edges = np.linspace(0.0, upper, 65)
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            u = 0.5 * (b - a) * nodes + 0.5 * (b + a)
            total += 0.5 * (b - a) * sum(w * math.exp(log_f(x) - log_peak) for x, w in zip(u, weights))
        value = float(total * math.exp(log_peak))
        # compare against half the panels for an error estimate
        coarse = 0.0
        edges2 = np.linspace(0.0, upper, 33)
        for a, b in zip(edges2[:-1], edges2[1:]):
            u = 0.5 * (b - a) * nodes + 0.5 * (b + a)
            coarse += 0.5 * (b - a) * sum(w * math.exp(log_f(x) - log_peak) for x, w in zip(u, weights))
        err = float(abs(total - coarse) * math.exp(log_peak) + 8 * _EPS * value)
        return ProfileEval(s, value, "gauss-legendre", err)
    raise ValueError(f"method must be 'quad' or 'gauss', got {method!r}")


def excursion_area_mc(n_paths: int = 1_000_000, n_steps: int = 64, seed: int = 0, batch: int = 50_000) -> tuple[np.ndarray, np.ndarray]:
    """Monte Carlo samples of the Brownian excursion area.

    A Brownian bridge is sampled on ``n_steps`` intervals together with the
    exact minimum inside each interval; the Vervaat transform (cyclic shift at
    the minimum) maps the bridge to an excursion with area
    ``int_0^1 (b(t) - min b) dt``.  Conditional on the grid values the bridge
    interpolates linearly in mean, so the trapezoid rule gives an unbiased
    area.  Returns ``(areas, squared areas)`` as arrays of length ``n_paths``.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    h = 1.0 / n_steps
    out = np.empty(n_paths)
    done = 0
    while done < n_paths:
        m = min(batch, n_paths - done)
        steps = rng.standard_normal((m, n_steps)) * math.sqrt(h)
        walk = np.concatenate([np.zeros((m, 1)), np.cumsum(steps, axis=1)], axis=1)
        t = np.linspace(0.0, 1.0, n_steps + 1)
        bridge = walk - t * walk[:, -1:]
        left, right = bridge[:, :-1], bridge[:, 1:]
        # minimum of a Brownian bridge from a to b over time h
        u = rng.random((m, n_steps))
        low = 0.5 * (left + right - np.sqrt((right - left) ** 2 - 2 * h * np.log(u)))
        area = h * (0.5 * (left + right)).sum(axis=1)
        out[done:done + m] = area - low.min(axis=1)
        done += m
    return out, out**2
