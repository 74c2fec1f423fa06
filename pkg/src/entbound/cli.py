"""Command-line entry point.

Reports go to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 invalid input, 2 internal error, 64 usage error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import reports
from .amplitude import overlap, overlap_trace
from .bounds import bound_report
from .errors import DegeneratePair, EntboundError, ScenarioError, SweepError, UnknownLabel
from .oracle import DEFAULT_N_SCAN, DEFAULT_TOL, MIN_N_SCAN, first_zero_search, overlap_via_oracle, simultaneous_orthogonality_time
from .spectral import canonical_pair, load_scenario
from .sweep import load_sweep_spec, run_sweep

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2, 64
ORACLE_THRESHOLD = 1e-10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _pair(text: str):
    parts = text.split(",")
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError(f"expected x,x' but got {text!r}")
    return parts[0].strip(), parts[1].strip()


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    p = _Parser(prog="entbound", description="Entanglement-formation time bounds for oracle operations.",
                formatter_class=fmt)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", help="check a scenario file", formatter_class=fmt)
    v.add_argument("scenario")

    t = sub.add_parser("trace", help="overlap trace as CSV", formatter_class=fmt)
    t.add_argument("scenario")
    t.add_argument("--pair", type=_pair, required=True, help="input labels x,x'")
    t.add_argument("--tmax", type=float, required=True)
    t.add_argument("--n", type=int, default=1001, help="number of grid points, t from 0 to tmax")

    b = sub.add_parser("bounds", help="bound report", formatter_class=fmt)
    b.add_argument("scenario")
    b.add_argument("--csv", action="store_true", help="emit the per-pair CSV summary instead of JSON")

    f = sub.add_parser("firstzero", help="first epsilon-orthogonality time", formatter_class=fmt)
    f.add_argument("scenario")
    f.add_argument("--pair", type=_pair, required=True)
    f.add_argument("--tol", type=float, default=DEFAULT_TOL)
    f.add_argument("--tmax", type=float, default=None, help="default: 50 x bound, or 50/(C da max|b|)")
    f.add_argument("--n-scan", type=int, default=DEFAULT_N_SCAN)
    f.add_argument("--scan-csv", default=None, help="also write the t,abs_z scan to this file")

    s = sub.add_parser("sweep", help="parameter sweep as CSV", formatter_class=fmt)
    s.add_argument("spec")
    s.add_argument("--with-tau-num", action="store_true", help="add first-zero times (slow)")

    c = sub.add_parser("compare", help="bound vs numerics vs reference limits", formatter_class=fmt)
    c.add_argument("scenario")
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.add_argument("--tmax", type=float, default=None, help="default: per-pair horizon")
    c.add_argument("--n-scan", type=int, default=DEFAULT_N_SCAN)

    o = sub.add_parser("oracle-check", help="engine vs brute-force overlap", formatter_class=fmt)
    o.add_argument("scenario")
    o.add_argument("--trials", type=int, default=20)
    o.add_argument("--tmax", type=float, default=10.0)
    o.add_argument("--seed", type=int, default=0)
    return p


def _check_search_args(args):
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    if args.tmax is not None and not args.tmax > 0:
        raise UsageError("--tmax must be positive")
    if args.n_scan < MIN_N_SCAN:
        raise UsageError(f"--n-scan must be at least {MIN_N_SCAN}")


def _validate(args):
    s = load_scenario(args.scenario)
    degenerate = []
    for pr in s.pairs:
        try:
            canonical_pair(s, pr)
        except DegeneratePair:
            degenerate.append(list(pr))
    return reports.to_json({
        "valid": True,
        "input_levels": list(s.input.labels),
        "output_levels": list(s.output.labels),
        "coupling": s.C,
        "pairs": [list(pr) for pr in s.pairs],
        "degenerate_pairs": degenerate,
        "dimension": s.dimension,
    })


def _trace(args):
    s = load_scenario(args.scenario)
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.tmax < 0:
        raise UsageError("--tmax must be non-negative")
    return reports.trace_csv(overlap_trace(s, args.pair, np.linspace(0.0, args.tmax, args.n)))


def _bounds(args):
    rep = bound_report(load_scenario(args.scenario))
    if rep.tau_ent is None:
        print("entbound: no designated pair admits a positive bound (NotApplicable)", file=sys.stderr)
    return reports.bound_summary_csv(rep) if args.csv else reports.to_json(reports.bound_report_dict(rep))


def _firstzero(args):
    _check_search_args(args)
    s = load_scenario(args.scenario)
    res, grid, vals = first_zero_search(s, args.pair, args.tmax, args.tol, args.n_scan, return_scan=True)
    if args.scan_csv:
        with open(args.scan_csv, "w", encoding="utf-8") as fh:
            fh.write(reports.scan_csv(grid, vals))
    return reports.to_json(reports.first_zero_dict(res))


def _sweep(args):
    spec = load_sweep_spec(args.spec)
    if args.with_tau_num:
        spec = replace(spec, with_tau_num=True)
    return reports.sweep_csv(run_sweep(spec), spec.outputs)


def _compare(args):
    _check_search_args(args)
    s = load_scenario(args.scenario)
    rep = bound_report(s)
    rows = []
    for pb in rep.pairs:
        tau_num = None
        if not pb.degenerate:
            tau_num = first_zero_search(s, pb.pair, args.tmax, args.tol, args.n_scan).tau_num
        rows.append((reports.pair_text(pb.pair), pb.tau, tau_num, rep.tau_ML, rep.tau_MT, rep.mean_Hint))
    if len(rep.pairs) > 1 and not any(pb.degenerate for pb in rep.pairs):
        sim = simultaneous_orthogonality_time(s, args.tol, args.tmax, args.n_scan)
        rows.append(("ALL", rep.tau_ent, sim.tau_num, rep.tau_ML, rep.tau_MT, rep.mean_Hint))
    return reports.compare_csv(rows)


def _oracle_check(args):
    s = load_scenario(args.scenario)
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    pairs = []
    for pr in s.pairs:
        try:
            canonical_pair(s, pr)
            pairs.append(pr)
        except DegeneratePair:
            pass
    if not pairs:
        raise ScenarioError([("DegeneratePair", "every designated pair is degenerate")])
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.trials):
        pr = pairs[int(rng.integers(len(pairs)))]
        t = float(rng.uniform(0.0, args.tmax))
        worst = max(worst, abs(complex(overlap(s, pr, t)) - overlap_via_oracle(s, pr, t)))
    return reports.to_json({"trials": args.trials, "seed": args.seed, "max_deviation": worst,
                            "threshold": ORACLE_THRESHOLD, "passed": worst < ORACLE_THRESHOLD})


_COMMANDS = {
    "validate": _validate,
    "trace": _trace,
    "bounds": _bounds,
    "firstzero": _firstzero,
    "sweep": _sweep,
    "compare": _compare,
    "oracle-check": _oracle_check,
}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        out = _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"entbound: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ScenarioError as exc:
        for code, msg in exc.issues:
            print(f"entbound: {code}: {msg}", file=sys.stderr)
        return EXIT_INVALID
    except SweepError as exc:
        print(f"entbound: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (UnknownLabel, DegeneratePair, OSError) as exc:
        print(f"entbound: {getattr(exc, 'code', type(exc).__name__)}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except EntboundError as exc:
        print(f"entbound: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"entbound: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    stdout.write(out)
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
