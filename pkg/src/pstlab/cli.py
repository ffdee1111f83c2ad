"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 surgery
refused, 5 ESE requested on a chain without PST.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .errors import NumericalError, SurgeryRefused, ValidationError
from .orthopoly import KrawtchoukParams, krawtchouk_coefficients
from .pst import DEFAULT_MAX_DENOMINATOR, certify_endpoint_pst, ese_scan, has_ese
from .reportio import build_chain, chain_block, csv_text, dumps, load_spec, spec_kind, write_atomic
from .surgery import surgery_chain
from .walk import amplitudes
from . import xkrawtchouk as xk

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL, EXIT_REFUSED, EXIT_NO_PST = 0, 2, 3, 4, 5
TOL_ENV = "PSTLAB_TOL"


class ESEUndefined(Exception):
    pass


def _tol(args):
    if args.tol is not None:
        return args.tol
    env = os.environ.get(TOL_ENV)
    if env is None:
        return None
    try:
        val = float(env)
    except ValueError:
        raise ValidationError(f"{TOL_ENV}={env!r} is not a number") from None
    if not (math.isfinite(val) and val > 0):
        raise ValidationError(f"{TOL_ENV} must be a positive number")
    return val


def _emit(text, out):
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _header(command, doc, args):
    return {
        "tool": "pstlab",
        "version": __version__,
        "command": command,
        "input": doc,
        "tolerances": {"tol": _tol(args), "max_denominator": args.max_denominator},
    }


def _chain_report(command, doc, J, args):
    report = _header(command, doc, args)
    chain, spectrum, d = chain_block(J)
    if spec_kind(doc) == "krawtchouk" and doc["krawtchouk"].get("normalization") == "monic":
        c = krawtchouk_coefficients(KrawtchoukParams(doc["krawtchouk"]["p"], doc["krawtchouk"]["M"]))
        chain["monic_offdiag_sq"] = list(c.offdiag_sq)
    report["chain"] = chain
    report["spectrum"] = spectrum
    pst = certify_endpoint_pst(J, _tol(args), args.max_denominator, decomp=d)
    report["pst"] = pst.to_dict()
    if not pst.has_pst and J.size > 1 and not pst.gap_condition:
        report["pst"]["refutation"] = "no odd-integer gap assignment within max_denominator"
    elif not pst.has_pst and J.size > 1:
        report["pst"]["refutation"] = "chain is not mirror symmetric"
    return report, pst


def cmd_analyze(args):
    doc = load_spec(args.spec)
    J = build_chain(doc)
    report, _ = _chain_report("analyze", doc, J, args)
    _emit(dumps(report), args.out)


def cmd_surgery(args):
    doc = load_spec(args.spec)
    J = build_chain(doc)
    remove = [int(s) for s in args.remove.split(",") if s.strip()] if args.remove else []
    if remove:
        new, _ = surgery_chain(J, remove, _tol(args))
    else:
        new = J
    report, _ = _chain_report("surgery", doc, new, args)
    if remove:
        report["surgery"] = {"removed": sorted(remove), "source_size": J.size}
    _emit(dumps(report), args.out)


def cmd_evolve(args):
    doc = load_spec(args.spec)
    J = build_chain(doc)
    N = J.size
    for flag, idx in (("--from", args.source), ("--to", args.target)):
        if not 0 <= idx < N:
            raise ValidationError(f"{flag} {idx} outside 0..{N - 1}")
    if args.points < 2:
        raise ValidationError("--points must be at least 2")
    if not (math.isfinite(args.t_max) and args.t_max >= 0):
        raise ValidationError("--t-max must be finite and non-negative")
    times = np.array([0.0]) if args.t_max == 0 else np.linspace(0.0, args.t_max, args.points)
    series = amplitudes(J, args.source, args.target, times)
    rows = [(t, c.real, c.imag, abs(c) ** 2) for t, c in zip(series.times, series.values)]
    text = csv_text(["t", "re", "im", "abs2"], rows)
    _emit(text, args.out)
    if args.plot:
        from .plotting import plot_transfer

        pst = certify_endpoint_pst(J, _tol(args), args.max_denominator) if N > 1 else None
        t0 = pst.transfer_time if pst is not None and pst.has_pst else None
        plot_transfer(series.times, series.probabilities, args.plot, (args.source, args.target), t0)


def cmd_ese(args):
    doc = load_spec(args.spec)
    J = build_chain(doc)
    report, pst = _chain_report("ese", doc, J, args)
    if not pst.has_pst:
        raise ESEUndefined("ESE undefined without PST")
    findings = ese_scan(J, pst, args.grid)
    report["ese"] = {
        "transfer_time": pst.transfer_time,
        "grid": args.grid,
        "findings": [{"t": t, "last_magnitude": m} for t, m in findings],
        "has_ese": has_ese(findings),
    }
    _emit(dumps(report), args.out)


def cmd_xwalk(args):
    doc = load_spec(args.spec)
    if spec_kind(doc) != "xkrawtchouk":
        raise ValidationError("spec: xwalk needs an 'xkrawtchouk' spec")
    N, p = int(doc["xkrawtchouk"]["N"]), float(doc["xkrawtchouk"]["p"])
    fam = xk.build_family(N, p)
    ham = xk.build_band_hamiltonian(fam)
    table = fam.eigenvector_table()
    T, min_return = xk.perfect_return_time(ham, table)
    horizon = 8 * T
    t_best, p_best = xk.endpoint_max_probability(ham, table, horizon, args.points)
    report = _header("xwalk", doc, args)
    report["family"] = {
        "N": N,
        "p": p,
        "degree_set": list(fam.degree_set),
        "grid": fam.grid,
        "weights_hat": fam.weights_hat,
        "norms": fam.norms,
        "orthogonality_residual": fam.orthogonality_residual,
    }
    report["vertex_map"] = [
        {"row": i, "walk_index": i + 1, "degree": s, "vertex_label": s}
        for i, s in enumerate(fam.degree_set)
    ]
    report["hamiltonian"] = {
        "entries": ham.entries,
        "off_band_mass": ham.off_band_mass,
        "last_row_support": list(ham.last_row_support),
        "spectrum_formula": ham.spectrum_formula,
    }
    report["perfect_return"] = {"time": T, "min_return_magnitude": min_return,
                                "found": min_return >= 1 - 1e-6}
    report["endpoint_transfer"] = {
        "pair": [1, fam.size],
        "horizon": horizon,
        "points": args.points,
        "max_probability": p_best,
        "at_time": t_best,
        "pst": p_best >= 1 - 1e-8,
    }
    _emit(dumps(report), args.out)
    if args.csv or args.plot:
        times = np.linspace(0.0, horizon, args.points)
        ret = np.array([np.min(xk.return_magnitudes(ham, table, t)) ** 2 for t in times])
        end = xk.x_amplitudes(ham, table, 1, fam.size, times).probabilities
        if args.csv:
            write_atomic(args.csv, csv_text(["t", "min_return_prob", "endpoint_prob"],
                                            zip(times, ret, end)))
        if args.plot:
            from .plotting import plot_xwalk

            plot_xwalk(times, ret, end, args.plot, T)


def build_parser():
    parser = argparse.ArgumentParser(prog="pstlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"pstlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("spec", help="chain spec (JSON)")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--tol", type=float, default=None,
                       help=f"gap tolerance (default 1e-9 * spectral range, env {TOL_ENV})")
        p.add_argument("--max-denominator", type=int, default=DEFAULT_MAX_DENOMINATOR)
        return p

    p = common(sub.add_parser("analyze", help="spectrum and endpoint PST certification"))
    p.set_defaults(func=cmd_analyze)

    p = common(sub.add_parser("evolve", help="transition amplitude series as CSV"))
    p.add_argument("--from", dest="source", type=int, required=True)
    p.add_argument("--to", dest="target", type=int, required=True)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--points", type=int, default=512)
    p.add_argument("--plot", help="also render |c|^2 to this image file")
    p.set_defaults(func=cmd_evolve)

    p = common(sub.add_parser("surgery", help="remove spectral points and re-certify"))
    p.add_argument("--remove", default="", help="comma-separated spectrum indices")
    p.set_defaults(func=cmd_surgery)

    p = common(sub.add_parser("ese", help="early state exclusion scan"))
    p.add_argument("--grid", type=int, default=4096)
    p.set_defaults(func=cmd_ese)

    p = common(sub.add_parser("xwalk", help="X2-Krawtchouk walk analysis"))
    p.add_argument("--points", type=int, default=16384)
    p.add_argument("--csv", help="write return/endpoint probability series here")
    p.add_argument("--plot", help="render the series to this image file")
    p.set_defaults(func=cmd_xwalk)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code not in (0, None) else EXIT_OK
    try:
        args.func(args)
    except SurgeryRefused as exc:
        print(f"pstlab: surgery refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except ESEUndefined as exc:
        print(f"pstlab: {exc}", file=sys.stderr)
        return EXIT_NO_PST
    except ValidationError as exc:
        print(f"pstlab: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"pstlab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
