"""Text exports: CSV tables and JSON reports.

Floats in CSV are written with 17 significant digits; JSON uses Python's
shortest round-trip repr.  Either way values read back bit-identical.
Missing values are empty CSV fields and JSON ``null``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict
from typing import Iterable, Sequence

from .amplitude import OverlapTrace
from .bounds import BoundReport, PairBound
from .oracle import FirstZeroResult
from .sweep import COLUMNS, SweepRow

TRACE_HEADER = ("t", "re_z", "im_z", "abs_z", "re_D", "im_D")
BOUND_HEADER = ("pair", "delta_a", "alpha", "B1", "B2", "tau", "orientation", "applicable")
SCAN_HEADER = ("t", "abs_z")
COMPARE_HEADER = ("pair", "tau_bound", "tau_num", "tau_ML", "tau_MT", "mean_Hint")


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def pair_text(pair) -> str:
    return "" if pair is None else f"{pair[0]}:{pair[1]}"


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def trace_csv(trace: OverlapTrace) -> str:
    rows = ((float(t), float(z.real), float(z.imag), float(abs(z)), float(D.real), float(D.imag))
            for t, z, D in zip(trace.times, trace.z_values, trace.D_values))
    return _csv(TRACE_HEADER, rows)


def scan_csv(grid, values) -> str:
    return _csv(SCAN_HEADER, ((float(t), float(v)) for t, v in zip(grid, values)))


def bound_summary_csv(report: BoundReport) -> str:
    rows = ((pair_text(pb.pair), pb.delta_a, pb.alpha, pb.B1, pb.B2,
             pb.tau if pb.applicable else "NotApplicable", pb.orientation, pb.applicable)
            for pb in report.pairs)
    return _csv(BOUND_HEADER, rows)


def sweep_csv(rows: Sequence[SweepRow], columns: Sequence[str] = COLUMNS) -> str:
    return _csv(columns, ([getattr(r, c) for c in columns] for r in rows))


def compare_csv(rows: Iterable[Sequence]) -> str:
    return _csv(COMPARE_HEADER, rows)


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def pair_bound_dict(pb: PairBound) -> dict:
    d = asdict(pb)
    d["pair"] = list(pb.pair)
    d["status"] = "applicable" if pb.applicable else pb.reason
    return d


def bound_report_dict(report: BoundReport) -> dict:
    return {
        "pairs": [pair_bound_dict(pb) for pb in report.pairs],
        "tau_ent": report.tau_ent,
        "applicable": report.tau_ent is not None,
        "mean_A": report.mean_A,
        "mean_B": report.mean_B,
        "mean_Hint": report.mean_Hint,
        "mean_H_shifted": report.mean_H_shifted,
        "spread_H": report.spread_H,
        "tau_ML": report.tau_ML,
        "tau_MT": report.tau_MT,
        "notes": list(report.notes),
    }


def first_zero_dict(res: FirstZeroResult) -> dict:
    d = asdict(res)
    d["pair"] = None if res.pair is None else list(res.pair)
    d["status"] = "found" if res.found else "NoZeroFound"
    return d


def to_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=False) + "\n"
