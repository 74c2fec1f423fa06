"""One-parameter sweeps over the kappa family, the coupling and the branch sum.

The kappa family fixes the positive-branch sum ``B1`` and the two nonzero
eigenvalues ``+b_plus`` and ``-b_minus`` and moves weight into the negative
branch so that ``B2 = kappa * B1``.  Any remaining probability sits on a
``b = 0`` level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np
import yaml

from .bounds import bound_report, global_branch_sums
from .errors import EntboundError, InfeasibleWeights, ScenarioError, SweepError
from .oracle import DEFAULT_N_SCAN, DEFAULT_TOL, first_zero_search
from .spectral import OutputRegisterSpec, Scenario, load_scenario, validate_scenario

PARAMETERS = ("kappa", "coupling_C", "branch_sum")
COLUMNS = ("param", "B1", "B2", "alpha", "tau_bound", "tau_num", "mean_Hint", "tau_ML", "tau_MT")
WEIGHT_SLACK = 1e-12
MONOTONE_TOL = 1e-12


def build_kappa_family(B1: float, b_plus: float, b_minus_magnitude: float, kappa: float) -> OutputRegisterSpec:
    """Output register with ``B1`` on ``+b_plus`` and ``kappa * B1`` on ``-b_minus``."""
    if not 0.0 <= kappa <= 1.0:
        raise InfeasibleWeights(f"kappa must lie in [0, 1], got {kappa!r}")
    if not (b_plus > 0 and b_minus_magnitude > 0):
        raise InfeasibleWeights("b_plus and b_minus_magnitude must be positive")
    p_plus = B1 / b_plus
    p_minus = kappa * B1 / b_minus_magnitude
    rest = 1.0 - p_plus - p_minus
    if p_plus < 0 or p_plus > 1 or p_minus > 1 or rest < -WEIGHT_SLACK:
        raise InfeasibleWeights(f"weights p+={p_plus!r}, p-={p_minus!r} do not fit in a probability "
                                f"distribution (sum {p_plus + p_minus!r})")
    levels = [("plus", 0.0, b_plus)]
    weights = {"plus": p_plus}
    if p_minus > 0:
        levels.append(("minus", 0.0, -b_minus_magnitude))
        weights["minus"] = p_minus
    rest = max(rest, 0.0) if rest > WEIGHT_SLACK else 0.0
    if rest > 0 or len(levels) < 2:
        levels.append(("zero", 0.0, 0.0))
        weights["zero"] = rest
    # absorb rounding so the squared norm is one to machine precision
    total = math.fsum(weights.values())
    return OutputRegisterSpec.build(levels, {k: math.sqrt(w / total) for k, w in weights.items()})


@dataclass(frozen=True)
class SweepSpec:
    """``template`` supplies the input register, coupling and pairs.

    For ``kappa`` and ``branch_sum`` sweeps the output register comes from
    :func:`build_kappa_family` with the settings in ``family`` (keys ``B1``,
    ``b_plus``, ``b_minus`` and, for ``branch_sum``, ``kappa``).  A
    ``branch_sum`` value ``S`` sets ``B1 = S / (1 + kappa)``.
    """

    template: Scenario
    parameter: str
    values: tuple[float, ...]
    family: Mapping[str, float] = field(default_factory=dict)
    outputs: tuple[str, ...] = COLUMNS
    with_tau_num: bool = False
    tol: float = DEFAULT_TOL
    n_scan: int = DEFAULT_N_SCAN

    def __post_init__(self):
        if self.parameter not in PARAMETERS:
            raise SweepError(f"parameter must be one of {PARAMETERS}, got {self.parameter!r}")
        v = np.asarray(self.values, dtype=float)
        if len(v) == 0:
            raise SweepError("values must not be empty")
        if len(v) > 1:
            d = np.diff(v)
            if not (np.all(d > 0) or np.all(d < 0)):
                raise SweepError("values must be strictly monotone")
        if self.parameter == "kappa" and (np.any(v < 0) or np.any(v > 1)):
            raise SweepError("kappa values must lie in [0, 1]")
        unknown = [c for c in self.outputs if c not in COLUMNS]
        if unknown:
            raise SweepError(f"unknown output columns {unknown}")

    def scenario_at(self, value: float) -> Scenario:
        fam = self.family
        try:
            if self.parameter == "coupling_C":
                return self.template.replace(C=float(value))
            if self.parameter == "kappa":
                out = build_kappa_family(fam["B1"], fam["b_plus"], fam["b_minus"], float(value))
            else:
                kappa = fam.get("kappa", 1.0)
                out = build_kappa_family(float(value) / (1.0 + kappa), fam["b_plus"], fam["b_minus"], kappa)
            return self.template.replace(output=out)
        except KeyError as exc:
            raise SweepError(f"family setting {exc.args[0]!r} is required for a {self.parameter} sweep",
                             value) from exc
        except (ScenarioError, InfeasibleWeights) as exc:
            raise SweepError(f"{self.parameter}={value!r}: {exc}", value, exc) from exc


@dataclass(frozen=True)
class SweepRow:
    param: float
    B1: float
    B2: float
    alpha: float | None
    tau_bound: float | None
    tau_num: float | None
    mean_Hint: float
    tau_ML: float | None
    tau_MT: float | None

    def as_dict(self) -> dict[str, Any]:
        return {c: getattr(self, c) for c in COLUMNS}


def sweep_row(s: Scenario, value: float, *, with_tau_num: bool = False,
              tol: float = DEFAULT_TOL, n_scan: int = DEFAULT_N_SCAN) -> SweepRow:
    """One row: global branch sums, the bound of the binding pair and energies."""
    rep = bound_report(s)
    B1, B2 = global_branch_sums(s)
    binding = rep.binding_pair
    tau_num = None
    if with_tau_num and binding is not None:
        tau_num = first_zero_search(s, binding.pair, tol=tol, n_scan=n_scan).tau_num
    return SweepRow(float(value), B1, B2, binding.alpha if binding else None, rep.tau_ent,
                    tau_num, rep.mean_Hint, rep.tau_ML, rep.tau_MT)


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    rows = []
    for v in spec.values:
        s = spec.scenario_at(v)
        try:
            rows.append(sweep_row(s, v, with_tau_num=spec.with_tau_num, tol=spec.tol, n_scan=spec.n_scan))
        except EntboundError as exc:
            raise SweepError(f"{spec.parameter}={v!r}: {exc}", v, exc) from exc
    return rows


@dataclass(frozen=True)
class MonotonicityVerdict:
    column: str
    direction: str
    passed: bool
    first_violation: tuple[int, int] | None = None

    def __bool__(self):
        return self.passed


def verify_monotonicity(rows: Sequence[SweepRow], column: str, direction: str) -> MonotonicityVerdict:
    """Check strict monotonicity of ``column``; rows with a missing value are dropped.

    ``direction`` is ``"increasing"`` or ``"decreasing"``.  On failure the
    indices (into the filtered rows) of the first offending adjacent pair are
    returned.
    """
    if direction not in ("increasing", "decreasing"):
        raise ValueError("direction must be 'increasing' or 'decreasing'")
    vals = [getattr(r, column) for r in rows]
    vals = [v for v in vals if v is not None]
    if len(vals) < 2:
        raise ValueError("need at least two rows with values to judge monotonicity")
    sign = 1.0 if direction == "increasing" else -1.0
    for k in range(len(vals) - 1):
        if not sign * (vals[k + 1] - vals[k]) > MONOTONE_TOL:
            return MonotonicityVerdict(column, direction, False, (k, k + 1))
    return MonotonicityVerdict(column, direction, True)


# ---------------------------------------------------------------------------
# sweep spec files
# ---------------------------------------------------------------------------

_SPEC_KEYS = {"template", "template_file", "parameter", "values", "family", "outputs",
              "with_tau_num", "tol", "n_scan"}
_FAMILY_KEYS = {"B1", "b_plus", "b_minus", "kappa"}


def parse_sweep_spec(raw: Mapping[str, Any], base_dir=None) -> SweepSpec:
    """Build a :class:`SweepSpec` from a parsed sweep file.

    The template is given inline under ``template`` or as a path under
    ``template_file`` (relative to ``base_dir``).
    """
    if not isinstance(raw, Mapping):
        raise ScenarioError([("InvalidValue", "sweep spec must be a mapping")])
    issues = [("UnknownKey", f"unknown key {k}") for k in raw if k not in _SPEC_KEYS]
    fam = raw.get("family", {}) or {}
    if not isinstance(fam, Mapping):
        issues.append(("InvalidValue", "family must be a mapping"))
        fam = {}
    issues += [("UnknownKey", f"unknown key family.{k}") for k in fam if k not in _FAMILY_KEYS]
    for k in ("parameter", "values"):
        if k not in raw:
            issues.append(("MissingKey", f"{k} is required"))
    if ("template" in raw) == ("template_file" in raw):
        issues.append(("MissingKey", "exactly one of template / template_file is required"))
    if issues:
        raise ScenarioError(issues)
    if "template" in raw:
        template = validate_scenario(raw["template"])
    else:
        path = Path(raw["template_file"])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        template = load_scenario(path)
    return SweepSpec(
        template=template,
        parameter=str(raw["parameter"]),
        values=tuple(float(v) for v in raw["values"]),
        family={k: float(v) for k, v in fam.items()},
        outputs=tuple(raw.get("outputs", COLUMNS)),
        with_tau_num=bool(raw.get("with_tau_num", False)),
        tol=float(raw.get("tol", DEFAULT_TOL)),
        n_scan=int(raw.get("n_scan", DEFAULT_N_SCAN)),
    )


def load_sweep_spec(path) -> SweepSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ScenarioError([("ParseError", f"{path}: {exc}")]) from exc
    return parse_sweep_spec(raw, Path(path).parent)
