"""Command-line entry point.

Each subcommand calls one library function and writes its result as CSV or
JSON to ``--out``, to ``$BIDISC_OUT_DIR/<command>.<format>`` when that
variable is set, or to stdout.  Exit status is 0 on success, 2 on invalid
input and 3 when a numerical computation fails.
"""

import argparse
import math
import os
import sys
from contextlib import redirect_stderr, redirect_stdout

from . import __version__, capacities, io, spectrum
from .dynamics import (approx_spectrum, conservation, delta_phi_ode, delta_phi_quad,
                       flow_cartesian, shoot_closed, trajectory_table)
from .dynamics.shooting import loop_start
from .errors import NumericalFailure
from .geometry import ApproximantParams
from .variational import (FourierLoop, certificate_coefficients, negativity_scan, psi_c,
                          verify_gamma_profile)

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


class Output:
    """What a command produced: a JSON payload and optionally a CSV table."""

    def __init__(self, result, columns=None, rows=None):
        self.result = result
        self.columns = columns
        self.rows = rows


def _params(args):
    return ApproximantParams(args.n, args.p)


def cmd_spectrum(args):
    els = spectrum.spectrum_up_to(args.max, include_gliding=not args.no_gliding,
                                  n_max=args.n_max)
    recs = [e.to_record() for e in els]
    rows = [(r["value"], r["label_type"], "" if r["k"] is None else r["k"], r["n"])
            for r in recs]
    return Output({"elements": recs}, ["value", "label_type", "k", "n"], rows)


def cmd_orbit(args):
    orbit = spectrum.billiard_orbit(args.k, args.n)
    path = spectrum.lift_to_characteristic(orbit)
    result = {"k": orbit.k, "n": orbit.n, "theta": orbit.theta,
              "perimeter": orbit.total_length, "action": path.action,
              "closure_error": orbit.closure_error,
              "vertex_angles": orbit.vertices, "path": path.points}
    rows = [(t, *p) for t, p in zip(path.times, path.points)]
    return Output(result, ["t", "x1", "x2", "y1", "y2"], rows)


def cmd_flow(args):
    params = _params(args)
    path = flow_cartesian(loop_start(args.theta, params), params, args.t_end, args.tol)
    table = trajectory_table(path, params)
    result = {"samples": len(table), "action_integral": path.action,
              "drift": conservation(path, params), "table": table}
    return Output(result, ["t", "x1", "x2", "y1", "y2", "det", "energy"], table.tolist())


def cmd_deltaphi(args):
    params = _params(args)
    rows = []
    for theta in args.theta:
        quad = delta_phi_quad(theta, params)
        ode = delta_phi_ode(theta, params, args.tol) if args.ode else float("nan")
        rows.append((theta, quad, ode, abs(quad - ode)))
    result = {"rows": [dict(zip(("theta", "quad", "ode", "difference"), r)) for r in rows]}
    return Output(result, ["theta", "quad", "ode", "difference"], rows)


def cmd_shoot(args):
    res = shoot_closed(args.k, args.m, _params(args), tol=args.tol)
    d = res.to_dict()
    return Output(d, list(d), [list(d.values())])


def _pairs(text):
    try:
        return [tuple(int(v) for v in item.split(",")) for item in text.split(";") if item]
    except ValueError:
        raise argparse.ArgumentTypeError(f"pairs must look like '0,2;1,3', got {text!r}")


def cmd_approx_spectrum(args):
    res = approx_spectrum(_params(args), args.M, args.eps, args.pairs, tol=args.tol).to_dict()
    rows = [(a["k"], a["m"], a["action"]) for a in res["actions"]]
    return Output(res, ["k", "m", "action"], rows)


def _coeff(text):
    """``k:re1,im1,re2,im2`` to ``(k, (z1, z2))``."""
    try:
        k, _, rest = text.partition(":")
        vals = [float(v) for v in rest.split(",")]
        if len(vals) != 4:
            raise ValueError
        return int(k), (complex(vals[0], vals[1]), complex(vals[2], vals[3]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"coefficient must look like 'k:re1,im1,re2,im2', "
                                         f"got {text!r}")


def cmd_psi(args):
    terms = {}
    for k, v in args.coeff:
        terms[k] = v
    f = FourierLoop.from_dict(terms)
    value = psi_c(f, args.c, args.nodes)
    rows = [(k, v[0].real, v[0].imag, v[1].real, v[1].imag) for k, v in sorted(terms.items())]
    return Output({"c": args.c, "psi": value, "K": f.K, "coefficients": rows},
                  ["k", "re_f1", "im_f1", "re_f2", "im_f2"], rows)


def cmd_scan(args):
    report = negativity_scan(args.family, args.c, samples=args.samples, K_tail=args.k_tail,
                             seed=args.seed, tail_scale=args.tail_scale).to_dict()
    cols = ["family", "c", "samples", "max_psi", "violations"]
    return Output(report, cols, [[report[c] for c in cols]])


def cmd_certify(args):
    co = certificate_coefficients(args.case, args.c).to_dict()
    if args.case != "I8":
        co["gamma_coverage"] = verify_gamma_profile(args.c).to_dict()
    return Output(co, ["case", "c", "A", "B", "C"], [[co[k] for k in ("case", "c", "A", "B", "C")]])


def cmd_capacities(args):
    domain = capacities.DomainSpec.parse(args.domain)
    seq = capacities.known_capacities(domain, args.kmax)
    recs = [c.to_record() for c in seq]
    rows = [(str(domain), r["k"], r["lower"], r["upper"], r["exact"]) for r in recs]
    return Output({"domain": str(domain), "capacities": recs},
                  ["domain", "k", "lower", "upper", "exact"], rows)


def cmd_obstruct(args):
    rep = capacities.obstruction_report(args.source, args.target, args.kmax)
    rows = [(v["k"], *v["source"], *v["target"]) for v in rep["values"]]
    return Output(rep, ["k", "source_lower", "source_upper", "target_lower", "target_upper"],
                  rows)


def cmd_distinguish(args):
    if args.area:
        rep = capacities.separation_scan(args.area, args.kmax)
        rows = [(r["disc_area"], r["R"], r["separating_k"]) for r in rep["rows"]]
    else:
        rep = capacities.distinguish_products(args.R, args.kmax)
        rows = [(rep["disc_area"], rep["R"], rep["separating_k"])]
    rows = [(a, R, "" if k is None else k) for a, R, k in rows]
    return Output(rep, ["disc_area", "R", "separating_k"], rows)


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _flow_args(p, tol):
    p.add_argument("--n", type=int, required=True, help="approximant index")
    p.add_argument("--p", type=float, default=3.0, help="profile exponent (default 3)")
    p.add_argument("--tol", type=_positive, default=tol)


def build_parser():
    parser = argparse.ArgumentParser(prog="bidisc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, fmt, help_text, columns=None):
        epilog = f"CSV columns: {', '.join(columns)}" if columns else None
        p = sub.add_parser(name, help=help_text, description=help_text, epilog=epilog)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=("csv", "json"), default=fmt)
        p.add_argument("--out", help="output file (default: $BIDISC_OUT_DIR or stdout)")
        return p

    p = add("spectrum", cmd_spectrum, "csv", "action spectrum values up to a bound",
            ["value", "label_type", "k", "n"])
    p.add_argument("--max", type=_positive, required=True)
    p.add_argument("--n-max", type=int)
    p.add_argument("--no-gliding", action="store_true")

    p = add("orbit", cmd_orbit, "csv", "billiard orbit and its lifted characteristic",
            ["t", "x1", "x2", "y1", "y2"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("flow", cmd_flow, "csv", "characteristic flow on the approximant boundary",
            ["t", "x1", "x2", "y1", "y2", "det", "energy"])
    _flow_args(p, 1e-10)
    p.add_argument("--theta", type=float, default=math.pi / 5, help="initial incidence angle")
    p.add_argument("--t-end", type=_positive, default=10.0)

    p = add("deltaphi", cmd_deltaphi, "csv", "angular defect of a corner transit",
            ["theta", "quad", "ode", "difference"])
    _flow_args(p, 1e-12)
    p.add_argument("--theta", type=float, nargs="+", required=True)
    p.add_argument("--no-ode", dest="ode", action="store_false",
                   help="skip the integrated cross-check")

    p = add("shoot", cmd_shoot, "json", "closed characteristic by shooting")
    _flow_args(p, 1e-12)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)

    p = add("approx-spectrum", cmd_approx_spectrum, "json",
            "shoot several orbits and compare truncated spectra", ["k", "m", "action"])
    _flow_args(p, 1e-12)
    p.add_argument("--M", type=_positive, required=True)
    p.add_argument("--eps", type=_positive, default=0.1)
    p.add_argument("--pairs", type=_pairs, required=True, help="e.g. '0,2;1,3;1,4'")

    p = add("psi", cmd_psi, "json", "evaluate Psi_c on a Fourier loop",
            ["k", "re_f1", "im_f1", "re_f2", "im_f2"])
    p.add_argument("--c", type=_positive, required=True)
    p.add_argument("--coeff", type=_coeff, action="append", required=True,
                   help="k:re1,im1,re2,im2 (repeatable)")
    p.add_argument("--nodes", type=int)

    p = add("scan-negativity", cmd_scan, "json", "Monte-Carlo sign check of Psi_c on a family",
            ["family", "c", "samples", "max_psi", "violations"])
    p.add_argument("--family", choices=("W2", "W3"), required=True)
    p.add_argument("--c", type=_positive, required=True)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--k-tail", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tail-scale", type=_positive, default=1.0)

    p = add("certify", cmd_certify, "json", "certificate coefficients", ["case", "c", "A", "B", "C"])
    p.add_argument("--case", choices=("I6", "I4", "I8"), required=True)
    p.add_argument("--c", type=_positive, default=4 * math.sqrt(2))

    p = add("capacities", cmd_capacities, "csv", "capacity sequence of a domain",
            ["domain", "k", "lower", "upper", "exact"])
    p.add_argument("--domain", required=True, help="e.g. bidisc, ball:3.14, bidisc*disc:0.95")
    p.add_argument("--kmax", type=int, required=True)

    p = add("obstruct", cmd_obstruct, "json", "capacity obstruction to an embedding",
            ["k", "source_lower", "source_upper", "target_lower", "target_upper"])
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--kmax", type=int, default=3)

    p = add("distinguish", cmd_distinguish, "json",
            "separate bidisc x disc(R) from complex bidisc x disc(R)",
            ["disc_area", "R", "separating_k"])
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--R", type=_positive)
    group.add_argument("--area", type=_positive, nargs="+", help="scan over disc areas pi R^2")
    p.add_argument("--kmax", type=int, default=101)
    return parser


def _recorded_params(args):
    skip = {"func", "format", "out", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with redirect_stdout(stdout), redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    try:
        out = args.func(args)
    except NumericalFailure as exc:
        print(f"bidisc {args.command}: numerical failure: {exc}", file=stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"bidisc {args.command}: {exc}", file=stderr)
        return EXIT_INVALID
    if args.format == "csv" and out.columns is not None:
        text = io.csv_text(out.columns, out.rows)
    else:
        text = io.json_document(args.command, _recorded_params(args), out.result)
    path = args.out or io.default_path(args.command, args.format)
    try:
        io.emit(text, path, stdout)
    except BrokenPipeError:
        # reader went away early, e.g. `| head`
        if stdout is sys.stdout:
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
