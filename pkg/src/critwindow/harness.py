"""Sweeps over the critical window, convergence fits and report files.

A sweep evaluates one quantity of one model on a ``V x s`` grid and divides
each value by its predicted scaling ``V^power * profile(s)``.  Each grid point
is isolated: a failure is written into that row's ``notes`` and the sweep
carries on.
"""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import platform
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import mpmath
import numpy as np
import scipy

from . import genfun, saw
from .checks import CheckResult, run_suite
from .errors import BoundHypothesisError, CapacityError, ConvergenceError, PrecisionError
from .percsim import estimate_chi_perc, perc_p
from .profiles import perc_profile, profile_I, profile_Ik, tree_one_point_limit

__all__ = [
    "CSV_COLUMNS",
    "ConvergenceFit",
    "ConvergenceReport",
    "ReportRow",
    "SweepSpec",
    "fit_convergence",
    "load_config",
    "report_csv",
    "run_sweep",
    "scaling_power",
    "verify",
    "write_report",
]

CSV_COLUMNS = ("model", "V", "s", "p", "value", "profile", "ratio", "tail_bound", "notes")

MODELS = ("tree", "animal", "saw", "perc")
QUANTITIES = {
    "tree": ("chi", "g0", "g01"),
    "animal": ("chi", "g0", "g01"),
    "saw": ("chi", "two_point"),
    "perc": ("chi", "tau"),
}

# exponent of V in the predicted scaling of each quantity
_POWERS = {
    ("tree", "chi"): 0.25,
    ("tree", "g01"): -0.75,
    ("tree", "g0"): 0.0,
    ("saw", "chi"): 0.5,
    ("saw", "two_point"): -0.5,
    ("perc", "chi"): 1 / 3,
    ("perc", "tau"): -2 / 3,
}

_POINT_ERRORS = (CapacityError, BoundHypothesisError, PrecisionError, ConvergenceError, ValueError, OverflowError)


def scaling_power(model: str, quantity: str) -> float:
    """Power of ``V`` multiplying the profile in the window asymptotics."""
    key = ("tree" if model == "animal" else model, quantity)
    if key not in _POWERS:
        raise ValueError(f"no scaling law for quantity {quantity!r} of model {model!r}")
    return _POWERS[key]


def window_exponent(model: str) -> float:
    """``p = 1 + s V^(-exponent)``: 1/2 for trees, animals and walks, 1/3 for percolation."""
    return 1 / 3 if model == "perc" else 0.5


def profile_value(model: str, quantity: str, s: float) -> float:
    """Predicted profile at ``s``; percolation uses ``f_perc`` with unit constants."""
    if model in ("tree", "animal"):
        return tree_one_point_limit(1.0) if quantity == "g0" else profile_I(s).value
    if model == "saw":
        return 2**-0.5 * profile_Ik(1, -math.sqrt(2) * s).value
    return perc_profile(s).value


@dataclass(frozen=True)
class SweepSpec:
    model: str
    V_grid: list[int]
    s_grid: list[float]
    quantity: str = "chi"
    precision_bits: int = genfun.DEFAULT_PRECISION_BITS
    output_path: str | None = None
    seed: int = 0
    replicas: int = 10_000
    threads: int = 1

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.quantity not in QUANTITIES[self.model]:
            raise ValueError(f"quantity for {self.model} must be one of {QUANTITIES[self.model]}, got {self.quantity!r}")
        if not self.V_grid or not self.s_grid:
            raise ValueError("V_grid and s_grid must be nonempty")
        if any(int(V) < 2 for V in self.V_grid):
            raise ValueError("every V must be >= 2")
        object.__setattr__(self, "V_grid", [int(V) for V in self.V_grid])
        object.__setattr__(self, "s_grid", [float(s) for s in self.s_grid])


@dataclass(frozen=True)
class ReportRow:
    model: str
    V: int
    s: float
    p: float
    value: float
    profile: float
    ratio: float
    tail_bound: float
    notes: str = ""


@dataclass(frozen=True)
class ConvergenceFit:
    """Slope of ``log|ratio - 1|`` against ``log V``; ``status`` is ``ok`` or why the fit was declined."""

    exponent: float
    residual: float
    status: str


@dataclass
class ConvergenceReport:
    spec: SweepSpec
    rows: list[ReportRow]
    fits: dict[float, ConvergenceFit] = field(default_factory=dict)

    @property
    def fitted_exponent(self) -> float:
        return self.fits[self.spec.s_grid[0]].exponent

    @property
    def fit_residual(self) -> float:
        return self.fits[self.spec.s_grid[0]].residual


def _evaluate(spec: SweepSpec, V: int, s: float) -> ReportRow:
    model, quantity = spec.model, spec.quantity
    nan = math.nan
    try:
        p = perc_p(V, s) if model == "perc" else 1 + s / math.sqrt(V)
    except ValueError as exc:
        return ReportRow(model, V, s, nan, nan, nan, nan, nan, f"error: {exc}")
    tail, notes = nan, ""
    try:
        if model == "perc":
            est = estimate_chi_perc(V, s, spec.replicas, spec.seed, threads=1)
            value = est.mean if quantity == "chi" else est.tau_mean
            se = est.std_error if quantity == "chi" else est.tau_se
            notes = f"se={se:.6g}"
        else:
            point = genfun.WindowPoint(V, s)
            bits = spec.precision_bits
            if model == "saw":
                fn = saw.saw_chi if quantity == "chi" else saw.saw_two_point
                res = fn(point, precision_bits=bits)
            elif model == "tree":
                fn = {"chi": genfun.chi_tree, "g0": genfun.g0_tree, "g01": genfun.g01_tree}[quantity]
                res = fn(point, precision_bits=bits)
            else:
                fn = {"chi": genfun.chi_animal, "g0": genfun.g0_animal, "g01": genfun.g01_animal}[quantity]
                res = fn(point, precision_bits=bits)
            value = float(res)
            if res.certificate is not None:
                tail = float(res.certificate.bound)
                notes = f"truncated after n={res.certificate.cutoff}"
    except _POINT_ERRORS as exc:
        return ReportRow(model, V, s, p, nan, nan, nan, nan, f"error: {type(exc).__name__}: {exc}")
    try:
        prof = profile_value(model, quantity, s)
    except _POINT_ERRORS as exc:
        return ReportRow(model, V, s, p, value, nan, nan, tail, f"profile error: {exc}")
    ratio = value / (V ** scaling_power(model, quantity) * prof)
    return ReportRow(model, V, s, p, value, prof, ratio, tail, notes)


def fit_convergence(data, s: float | None = None) -> ConvergenceFit:
    """Least-squares slope of ``log|ratio - 1|`` in ``log V``.

    ``data`` is a :class:`ConvergenceReport` (restricted to ``s``, default the
    first grid value) or an iterable of ``(V, ratio)`` pairs.  The fit is
    declined when fewer than 3 usable points remain or a ratio equals 1 to
    double precision.
    """
    if isinstance(data, ConvergenceReport):
        s = data.spec.s_grid[0] if s is None else s
        pairs = [(r.V, r.ratio) for r in data.rows if r.s == s]
    else:
        pairs = list(data)
    pairs = [(V, r) for V, r in pairs if math.isfinite(r)]
    if len({V for V, _ in pairs}) < 3:
        return ConvergenceFit(math.nan, math.nan, "declined: fewer than 3 V values with finite ratios")
    if any(abs(r - 1) <= 4 * np.finfo(float).eps for _, r in pairs):
        return ConvergenceFit(math.nan, math.nan, "declined: ratio equals 1 to double precision")
    x = np.log([V for V, _ in pairs])
    y = np.log([abs(r - 1) for _, r in pairs])
    coeffs, res, *_ = np.polyfit(x, y, 1, full=True)
    residual = float(math.sqrt(res[0])) if len(res) else 0.0
    return ConvergenceFit(float(coeffs[0]), residual, "ok")


def run_sweep(spec: SweepSpec) -> ConvergenceReport:
    """Evaluate the grid; rows are ordered by ``(V, s)`` whatever the thread count."""
    points = sorted((V, s) for V in set(spec.V_grid) for s in set(spec.s_grid))
    if spec.threads > 1:
        with ThreadPoolExecutor(spec.threads) as pool:
            rows = list(pool.map(lambda vs: _evaluate(spec, *vs), points))
    else:
        rows = [_evaluate(spec, V, s) for V, s in points]
    report = ConvergenceReport(spec, rows)
    for s in spec.s_grid:
        report.fits[s] = fit_convergence(report, s)
    return report


def _fmt(x) -> str:
    if isinstance(x, float):
        return "" if math.isnan(x) else repr(x)
    return str(x)


def report_csv(report: ConvergenceReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        writer.writerow([_fmt(getattr(row, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def report_metadata(report: ConvergenceReport, config: dict | None = None) -> dict:
    return {
        "spec": dataclasses.asdict(report.spec),
        "window_exponent": window_exponent(report.spec.model),
        "scaling_power": scaling_power(report.spec.model, report.spec.quantity),
        "fits": {repr(s): dataclasses.asdict(f) for s, f in report.fits.items()},
        "config": config or {},
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "mpmath": mpmath.__version__,
        },
    }


def write_report(report: ConvergenceReport, path: str | Path, config: dict | None = None) -> tuple[Path, Path]:
    """Write ``path`` (CSV) and ``path`` with suffix ``.json`` (metadata)."""
    path = Path(path)
    path.write_text(report_csv(report))
    meta = path.with_suffix(".json")
    meta.write_text(json.dumps(report_metadata(report, config), indent=2, sort_keys=True) + "\n")
    return path, meta


def load_config(path: str | Path) -> dict[str, str]:
    """Parse a ``key = value`` file; ``#`` starts a comment, dashes in keys become underscores."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def verify(suite: str = "all", stream=None) -> tuple[bool, list[CheckResult]]:
    """Run an acceptance suite, print one line per check and return ``(all passed, results)``."""
    stream = stream or sys.stdout
    results = run_suite(suite)
    for r in results:
        print(r.line(), file=stream)
    passed = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} checks passed", file=stream)
    return passed, results
