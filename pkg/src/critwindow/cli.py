"""Command-line front end: ``critwindow <command> [options]``.

Exit status is 0 on success, 1 when a verification check fails and 2 for
usage errors or requests outside a function's domain.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

import mpmath

from . import asymptotics as asy
from . import genfun, harness, profiles, saw
from .checks import SUITES
from .errors import BoundHypothesisError, CapacityError, ConvergenceError, PrecisionError
from .exact_counts import CountTable, brute_force_connected, default_table
from .percsim import estimate_chi_perc

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _int_list(text: str) -> list[int]:
    return [int(float(x)) for x in text.split(",") if x.strip()]


def _digits(bits: int) -> int:
    return max(6, int(bits * math.log10(2)) - 2)


def _window_point(args):
    if (args.s is None) == (args.p is None):
        raise ValueError("give exactly one of --s or --p")
    if args.p is not None:
        return genfun.WindowPoint.from_p(args.V, args.p)
    return genfun.WindowPoint(args.V, args.s)


def _print_real(res, bits: int, out) -> None:
    print(mpmath.nstr(res.value, _digits(bits)), file=out)
    if res.certificate is not None:
        c = res.certificate
        print(f"# truncated after n={c.cutoff}; omitted terms <= {mpmath.nstr(c.bound, 6)}", file=out)


def cmd_count(args, out) -> int:
    if args.oracle:
        print(brute_force_connected(args.n, args.m), file=out)
        return EXIT_OK
    n_max = args.table_max or max(args.n, 1)
    if args.n > n_max:
        raise CapacityError(f"n={args.n} exceeds --table-max={n_max}")
    table = default_table(n_max) if args.table_max is None else CountTable(n_max)
    print(table.entry(args.n, args.m), file=out)
    return EXIT_OK


def cmd_genfun(args, out) -> int:
    point = _window_point(args)
    bits = args.precision_bits
    name = args.quantity.replace("-", "_")
    if name in ("delta0", "delta_chi"):
        if args.model != "animal":
            raise ValueError(f"{args.quantity} is an animal correction; use --model animal")
        fn = genfun.delta0 if name == "delta0" else genfun.delta_chi
    else:
        fn = getattr(genfun, f"{name}_{args.model}")
    _print_real(fn(point, precision_bits=bits), bits, out)
    return EXIT_OK


def cmd_bounds(args, out) -> int:
    table = default_table(max(args.n_max, 3))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["n", "k", "exact", "estimate_or_bound", "ratio"])
    with mpmath.workprec(args.precision_bits):
        if args.report in ("prop", "bcm"):
            for n in range(3, args.n_max + 1):
                for k in range(0, n + 1):
                    exact = table.entry(n, n + k)
                    if exact == 0:
                        continue
                    est = asy.prop_bound(n, k) if args.report == "prop" else asy.bcm_estimate(n, k)
                    writer.writerow([n, k, exact, mpmath.nstr(est, 12), mpmath.nstr(exact / est, 12)])
        else:
            # sparse at n^(3/2) z = 1, dense at z = 3/(e n); k is the first surplus index of the part
            for n in range(3, args.n_max + 1):
                if args.report == "sparse":
                    z = 1 / mpmath.mpf(n) ** 1.5
                    exact, bound, k = asy.sparse_A(n, z, table), asy.sparse_A_series_bound(n, z, 1.0), 0
                else:
                    z = 3 / (mpmath.e * n)
                    exact, bound, k = asy.dense_B(n, z, table), asy.dense_B_bound(n, z), n // 2
                writer.writerow([n, k, mpmath.nstr(exact, 12), mpmath.nstr(bound, 12), mpmath.nstr(exact / bound, 12)])
    return EXIT_OK


def cmd_profile(args, out) -> int:
    which = args.which

    def need(name):
        value = getattr(args, name)
        if value is None:
            raise ValueError(f"--which {which} needs --{name}")
        return value

    if which == "lambert":
        print(repr(profiles.lambert_w0(need("z"))), file=out)
        return EXIT_OK
    if which == "fn":
        print(repr(profiles.spin_profile_fn(need("n"), need("s"), args.tol)), file=out)
        return EXIT_OK
    if which == "I":
        ev = profiles.profile_I(need("s"), args.tol)
    elif which == "Ik":
        ev = profiles.profile_Ik(need("k"), need("s"), args.tol)
    else:
        ev = profiles.perc_profile(need("s"), tol=args.tol)
    print(f"{ev.value!r} +- {ev.est_abs_error:.3g} ({ev.method})", file=out)
    return EXIT_OK


def cmd_saw(args, out) -> int:
    point = _window_point(args)
    fn = saw.saw_chi if args.quantity == "chi" else saw.saw_two_point
    _print_real(fn(point, precision_bits=args.precision_bits), args.precision_bits, out)
    return EXIT_OK


def cmd_percsim(args, out) -> int:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["V", "s", "chi_mean", "chi_se", "tau_mean", "tau_se", "replicas", "seed"])
    for V in args.V:
        for s in args.s:
            e = estimate_chi_perc(V, s, args.replicas, args.seed, sampler=args.sampler, threads=args.threads)
            writer.writerow([V, repr(s), repr(e.mean), repr(e.std_error), repr(e.tau_mean), repr(e.tau_se), e.replicas, e.seed])
    return EXIT_OK


def cmd_sweep(args, out, config: dict) -> int:
    spec = harness.SweepSpec(
        args.model, args.V, args.s, args.quantity,
        precision_bits=args.precision_bits, output_path=args.output,
        seed=args.seed, replicas=args.replicas, threads=args.threads,
    )
    report = harness.run_sweep(spec)
    if args.output:
        harness.write_report(report, args.output, config)
    else:
        out.write(harness.report_csv(report))
    for s, fit in report.fits.items():
        print(f"# s={s:g}: exponent {fit.exponent:.4g}, residual {fit.residual:.3g} ({fit.status})", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    passed, _ = harness.verify(args.suite, stream=out)
    return EXIT_OK if passed else EXIT_FAIL


GLOBAL_OPTIONS = ("config", "precision_bits", "threads", "output")


def _global_options(suppress: bool) -> argparse.ArgumentParser:
    # subcommands repeat the global flags with suppressed defaults so that a
    # flag given before the subcommand is not overwritten
    def default(value):
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=default(None), help="key = value file supplying defaults for any option")
    common.add_argument("--precision-bits", type=int, default=default(genfun.DEFAULT_PRECISION_BITS))
    common.add_argument("--threads", type=int, default=default(1))
    common.add_argument("--output", default=default(None), help="write results here instead of standard output")
    return common


def build_parser(config: dict[str, str] | None = None) -> argparse.ArgumentParser:
    """Argument parser; ``config`` values act as defaults that explicit flags override."""
    top = _global_options(suppress=False)
    common = _global_options(suppress=True)
    parser = argparse.ArgumentParser(prog="critwindow", description=__doc__.splitlines()[0], parents=[top])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="exact connected-graph count C(n, m)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--oracle", action="store_true", help="count by brute-force enumeration (n <= 8)")
    p.add_argument("--table-max", type=int, help="build a table of this size")

    window = argparse.ArgumentParser(add_help=False)
    window.add_argument("--V", type=int, required=True)
    window.add_argument("--s", type=float)
    window.add_argument("--p", type=float)

    p = sub.add_parser("genfun", parents=[common, window], help="tree and animal generating functions")
    p.add_argument("--model", choices=["tree", "animal"], default="tree")
    p.add_argument("--quantity", choices=["g0", "g01", "chi", "delta0", "delta-chi"], default="chi")

    p = sub.add_parser("bounds", parents=[common], help="CSV comparison of exact counts with estimates and bounds")
    p.add_argument("--n-max", type=int, default=40)
    p.add_argument("--report", choices=["prop", "bcm", "sparse", "dense"], default="prop")

    p = sub.add_parser("profile", parents=[common], help="scaling profiles and the Lambert function")
    p.add_argument("--which", choices=["I", "Ik", "fn", "fperc", "lambert"], default="I")
    p.add_argument("--s", type=float)
    p.add_argument("--z", type=float)
    p.add_argument("--k", type=float)
    p.add_argument("--n", type=float)
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("saw", parents=[common, window], help="self-avoiding walk on the complete graph")
    p.add_argument("--quantity", choices=["chi", "two_point"], default="chi")

    p = sub.add_parser("percsim", parents=[common], help="Monte Carlo cluster sizes in G(V, p/V)")
    p.add_argument("--V", type=_int_list, required=True, help="comma-separated vertex counts")
    p.add_argument("--s", type=_float_list, default="0", help="comma-separated window coordinates")
    p.add_argument("--replicas", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sampler", choices=["bfs", "skip"], default="bfs")

    p = sub.add_parser("sweep", parents=[common], help="grid sweep with scaling ratios (CSV + JSON)")
    p.add_argument("--model", choices=list(harness.MODELS), required=True)
    p.add_argument("--V", type=_int_list, required=True, help="comma-separated vertex counts")
    p.add_argument("--s", type=_float_list, default="0", help="comma-separated window coordinates")
    p.add_argument("--quantity", default="chi")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicas", type=int, default=10_000)

    p = sub.add_parser("verify", parents=[common], help="run acceptance checks")
    p.add_argument("suite", nargs="?", default="all", choices=[*SUITES, "all"])

    if config:
        for action in parser._actions:
            if action.dest in config and action.dest in GLOBAL_OPTIONS:
                action.default = config[action.dest]
        for subparser in sub.choices.values():
            for action in subparser._actions:
                if action.dest not in config or action.dest in GLOBAL_OPTIONS:
                    continue
                value = config[action.dest]
                if action.nargs == 0:
                    value = value.lower() in ("1", "true", "yes", "on")
                # string defaults are converted by the option's type at parse time
                action.default = value
                action.required = False
    return parser


def _config_path(argv: list[str]) -> str | None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    return known.config


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    config: dict = {}
    config_path = _config_path(argv)
    if config_path:
        try:
            config = harness.load_config(config_path)
        except (OSError, ValueError) as exc:
            print(f"critwindow: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    parser = build_parser(config)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    buffer = io.StringIO()
    target = buffer if (args.output and args.command != "sweep") else sys.stdout
    handlers = {
        "count": cmd_count, "genfun": cmd_genfun, "bounds": cmd_bounds, "profile": cmd_profile,
        "saw": cmd_saw, "percsim": cmd_percsim, "verify": cmd_verify,
    }
    try:
        if args.command == "sweep":
            code = cmd_sweep(args, target, config)
        else:
            code = handlers[args.command](args, target)
    except (ValueError, TypeError, CapacityError, BoundHypothesisError, PrecisionError, ConvergenceError) as exc:
        print(f"critwindow {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if target is buffer:
        Path(args.output).write_text(buffer.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
