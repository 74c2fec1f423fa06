"""Spectral description of the input/output register pair.

Everything here works in units with hbar = 1 (so h = 2*pi).  The composite
Hamiltonian is diagonal in the product eigenbasis ``|x>|i>`` with eigenvalues

    E_xi = epsilon_x + E_i + C * a_x * b_i

and the zero of energy is moved to the composite ground level.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .errors import DegeneratePair, ScenarioError, UnknownLabel

#: Planck constant in hbar = 1 units.
PLANCK = 2.0 * math.pi

NORM_TOL = 1e-12
RENORM_TOL = 1e-9

Label = str
Pair = tuple[Label, Label]

_INT_RE = re.compile(r"[+-]?\d+\Z")


def label_key(label: Label):
    """Sort key giving natural order: integer-like labels first, numerically."""
    if _INT_RE.match(label):
        return (0, int(label), label)
    return (1, 0, label)


@dataclass(frozen=True)
class InputLevel:
    label: Label
    epsilon: float
    a: float


@dataclass(frozen=True)
class OutputLevel:
    label: Label
    E: float
    b: float


def _check_levels(levels, kind, issues):
    labels = [lv.label for lv in levels]
    if len(levels) < 2:
        issues.append(("EmptyRegister", f"{kind} register needs at least 2 levels, got {len(levels)}"))
    seen = set()
    for lab in labels:
        if lab in seen:
            issues.append(("DuplicateLabel", f"{kind} label {lab!r} appears more than once"))
        seen.add(lab)


def _check_norm(amps, kind, issues):
    norm2 = float(np.sum(np.abs(amps) ** 2))
    if abs(norm2 - 1.0) > NORM_TOL:
        issues.append(("NonUnitNorm", f"{kind} amplitudes have squared norm {norm2!r}"))


@dataclass(frozen=True, eq=False)
class InputRegisterSpec:
    """Input register: levels ``(x, epsilon_x, a_x)`` and amplitudes ``C_x``.

    Levels are stored in ascending label order; ``amplitudes`` is aligned
    with ``levels``.
    """

    levels: tuple[InputLevel, ...]
    amplitudes: tuple[complex, ...]

    def __post_init__(self):
        issues: list = []
        _check_levels(self.levels, "input", issues)
        if len(self.amplitudes) != len(self.levels):
            issues.append(("ShapeMismatch", "input amplitudes do not match levels"))
        else:
            _check_norm(np.asarray(self.amplitudes, dtype=complex), "input", issues)
        if issues:
            raise ScenarioError(issues)

    @classmethod
    def build(cls, levels: Iterable[tuple], amplitudes: Mapping[Label, complex]) -> "InputRegisterSpec":
        lv = sorted((InputLevel(str(x), float(e), float(a)) for x, e, a in levels),
                    key=lambda l: label_key(l.label))
        amps = {str(k): complex(v) for k, v in amplitudes.items()}
        return cls(tuple(lv), tuple(amps.get(l.label, 0j) for l in lv))

    @property
    def labels(self) -> tuple[Label, ...]:
        return tuple(l.label for l in self.levels)

    @property
    def epsilon(self) -> np.ndarray:
        return np.array([l.epsilon for l in self.levels])

    @property
    def a(self) -> np.ndarray:
        return np.array([l.a for l in self.levels])

    @property
    def coefficients(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2

    def index(self, label) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise UnknownLabel(f"unknown input label {label!r}") from None


@dataclass(frozen=True, eq=False)
class OutputRegisterSpec:
    """Output register: levels ``(i, E_i, b_i)`` and the decomposition ``d_i``
    of the initial state ``|0>_O`` over rank-1 eigenprojectors."""

    levels: tuple[OutputLevel, ...]
    initial_amplitudes: tuple[complex, ...]

    def __post_init__(self):
        issues: list = []
        _check_levels(self.levels, "output", issues)
        if len(self.initial_amplitudes) != len(self.levels):
            issues.append(("ShapeMismatch", "output amplitudes do not match levels"))
        else:
            _check_norm(np.asarray(self.initial_amplitudes, dtype=complex), "output", issues)
        if issues:
            raise ScenarioError(issues)

    @classmethod
    def build(cls, levels: Iterable[tuple], amplitudes: Mapping[Label, complex]) -> "OutputRegisterSpec":
        lv = sorted((OutputLevel(str(i), float(E), float(b)) for i, E, b in levels),
                    key=lambda l: label_key(l.label))
        amps = {str(k): complex(v) for k, v in amplitudes.items()}
        return cls(tuple(lv), tuple(amps.get(l.label, 0j) for l in lv))

    @property
    def labels(self) -> tuple[Label, ...]:
        return tuple(l.label for l in self.levels)

    @property
    def E(self) -> np.ndarray:
        return np.array([l.E for l in self.levels])

    @property
    def b(self) -> np.ndarray:
        return np.array([l.b for l in self.levels])

    @property
    def d(self) -> np.ndarray:
        return np.array(self.initial_amplitudes, dtype=complex)

    @property
    def weights(self) -> np.ndarray:
        """``p_i = |d_i|^2``."""
        return np.abs(self.d) ** 2

    def index(self, label) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise UnknownLabel(f"unknown output label {label!r}") from None


@dataclass(frozen=True, eq=False)
class Scenario:
    input: InputRegisterSpec
    output: OutputRegisterSpec
    C: float
    pairs: tuple[Pair, ...] = field(default=())

    def __post_init__(self):
        issues = []
        if not (self.C > 0) or not math.isfinite(self.C):
            issues.append(("NonPositiveCoupling", f"coupling C must be positive, got {self.C!r}"))
        known = set(self.input.labels)
        for x, xp in self.pairs:
            for lab in (x, xp):
                if lab not in known:
                    issues.append(("UnknownLabel", f"pair label {lab!r} is not an input level"))
            if x == xp:
                issues.append(("InvalidPair", f"pair ({x!r}, {xp!r}) repeats a label"))
        if issues:
            raise ScenarioError(issues)

    @classmethod
    def build(cls, input: InputRegisterSpec, output: OutputRegisterSpec, C: float,
              pairs: Sequence[Sequence] | None = None) -> "Scenario":
        if pairs is None:
            pairs = list(itertools.combinations(input.labels, 2))
        return cls(input, output, float(C), tuple((str(x), str(xp)) for x, xp in pairs))

    def replace(self, **changes) -> "Scenario":
        kw = dict(input=self.input, output=self.output, C=self.C, pairs=self.pairs)
        kw.update(changes)
        return Scenario(**kw)

    @property
    def dimension(self) -> int:
        return len(self.input.levels) * len(self.output.levels)

    def delta_a(self, pair) -> float:
        x, xp = pair
        return self.input.levels[self.input.index(x)].a - self.input.levels[self.input.index(xp)].a


@dataclass(frozen=True, eq=False)
class CompositeEnergyTable:
    """Composite energies on the ``input x output`` grid.

    ``raw[k, i]`` is ``E_xi`` for input level ``k`` and output level ``i``;
    ``shifted`` has the ground energy subtracted.
    """

    input_labels: tuple[Label, ...]
    output_labels: tuple[Label, ...]
    raw: np.ndarray
    E_ground: float

    @property
    def shifted(self) -> np.ndarray:
        return self.raw - self.E_ground

    @property
    def entries(self) -> dict[tuple[Label, Label], tuple[float, float]]:
        sh = self.shifted
        return {(x, i): (float(self.raw[k, j]), float(sh[k, j]))
                for k, x in enumerate(self.input_labels)
                for j, i in enumerate(self.output_labels)}


def composite_energies(s: Scenario) -> CompositeEnergyTable:
    eps, a = s.input.epsilon, s.input.a
    E, b = s.output.E, s.output.b
    raw = eps[:, None] + E[None, :] + s.C * np.outer(a, b)
    return CompositeEnergyTable(s.input.labels, s.output.labels, raw, float(raw.min()))


@dataclass(frozen=True)
class BranchSplit:
    """Output spectrum split by the sign of ``b_i`` for a canonically ordered pair.

    ``branch1`` holds ``(p_i, b_i)`` with ``b_i >= 0``; ``branch2`` holds
    ``(p'_j, beta_j)`` with ``beta_j = -b_j > 0``.  Zero eigenvalues live in
    branch 1 (also after :meth:`conjugate`).
    """

    pair: Pair
    delta_a: float
    branch1: tuple[tuple[float, float], ...]
    branch2: tuple[tuple[float, float], ...]

    @property
    def alpha(self) -> float:
        return math.fsum(p for p, _ in self.branch1)

    @property
    def B1(self) -> float:
        return math.fsum(p * b for p, b in self.branch1)

    @property
    def B2(self) -> float:
        return math.fsum(p * beta for p, beta in self.branch2)

    def conjugate(self) -> "BranchSplit":
        """Split describing ``conj(z)``: positive and negative branches swap."""
        zeros = tuple(t for t in self.branch1 if t[1] == 0.0)
        pos = tuple(t for t in self.branch1 if t[1] > 0.0)
        return BranchSplit(self.pair, self.delta_a, self.branch2 + zeros, pos)


def canonical_pair(s: Scenario, pair) -> tuple[Pair, float]:
    """Order ``pair`` so that ``a_x - a_x' > 0``; raise on equal eigenvalues."""
    x, xp = str(pair[0]), str(pair[1])
    da = s.delta_a((x, xp))
    if da == 0.0:
        raise DegeneratePair(f"pair ({x!r}, {xp!r}) has a_x == a_x' = "
                             f"{s.input.levels[s.input.index(x)].a!r}; orthogonality is unreachable")
    if da < 0:
        return (xp, x), -da
    return (x, xp), da


def branch_split(s: Scenario, pair) -> BranchSplit:
    cp, da = canonical_pair(s, pair)
    p, b = s.output.weights, s.output.b
    b1 = tuple((float(p[k]), float(b[k])) for k in range(len(b)) if b[k] >= 0.0)
    b2 = tuple((float(p[k]), float(-b[k])) for k in range(len(b)) if b[k] < 0.0)
    return BranchSplit(cp, float(da), b1, b2)


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

_TOP_KEYS = {"input", "output", "coupling", "pairs"}
_INPUT_KEYS = {"levels", "amplitudes"}
_OUTPUT_KEYS = {"levels", "amplitudes"}
_COUPLING_KEYS = {"C"}
_IN_LEVEL_KEYS = {"label", "epsilon", "a"}
_OUT_LEVEL_KEYS = {"label", "E", "b"}


def _unknown(mapping, allowed, where, issues):
    for k in mapping:
        if k not in allowed:
            issues.append(("UnknownKey", f"unknown key {where}{k!s}"))


def _number(value, where, issues):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        issues.append(("InvalidValue", f"{where} must be a real number, got {value!r}"))
        return math.nan
    v = float(value)
    if not math.isfinite(v):
        issues.append(("InvalidValue", f"{where} must be finite, got {value!r}"))
    return v


def _amplitude(value, where, issues):
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(_number(value[0], where + "[0]", issues), _number(value[1], where + "[1]", issues))
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(float(value))
    issues.append(("InvalidValue", f"{where} must be [re, im], got {value!r}"))
    return complex(math.nan)


def _levels(raw, where, keys, value_keys, issues):
    if not isinstance(raw, list):
        issues.append(("MissingKey" if raw is None else "InvalidValue", f"{where} must be a list of levels"))
        return []
    out = []
    for n, item in enumerate(raw):
        loc = f"{where}[{n}]"
        if not isinstance(item, dict):
            issues.append(("InvalidValue", f"{loc} must be a mapping"))
            continue
        _unknown(item, keys, loc + ".", issues)
        if "label" not in item:
            issues.append(("MissingKey", f"{loc}.label is required"))
            continue
        vals = []
        for k in value_keys:
            if k not in item:
                issues.append(("MissingKey", f"{loc}.{k} is required"))
                vals.append(math.nan)
            else:
                vals.append(_number(item[k], f"{loc}.{k}", issues))
        out.append((str(item["label"]), *vals))
    return out


def _amplitude_map(raw, labels, where, issues):
    if not isinstance(raw, dict):
        issues.append(("MissingKey" if raw is None else "InvalidValue", f"{where} must map labels to [re, im]"))
        return {}
    amps = {}
    for k, v in raw.items():
        lab = str(k)
        if lab not in labels:
            issues.append(("UnknownLabel", f"{where}.{lab} does not name a level"))
            continue
        amps[lab] = _amplitude(v, f"{where}.{lab}", issues)
    return amps


def _normalized(amps, kind, issues):
    norm2 = math.fsum(abs(v) ** 2 for v in amps.values())
    if not math.isfinite(norm2) or abs(norm2 - 1.0) > RENORM_TOL:
        issues.append(("NonUnitNorm", f"{kind} amplitudes have squared norm {norm2!r} (need 1 within {RENORM_TOL:g})"))
        return amps
    scale = 1.0 / math.sqrt(norm2)
    return {k: v * scale for k, v in amps.items()}


def validate_scenario(raw: Mapping[str, Any]) -> Scenario:
    """Turn a parsed config mapping into a :class:`Scenario`.

    Amplitudes whose squared norm is within 1e-9 of one are renormalized;
    anything further off is rejected.  All problems found are collected into
    a single :class:`ScenarioError`.
    """
    issues: list[tuple[str, str]] = []
    if not isinstance(raw, Mapping):
        raise ScenarioError([("InvalidValue", "scenario must be a mapping")])
    _unknown(raw, _TOP_KEYS, "", issues)
    for k in ("input", "output", "coupling"):
        if k not in raw:
            issues.append(("MissingKey", f"{k} is required"))

    inp = raw.get("input") or {}
    out = raw.get("output") or {}
    cpl = raw.get("coupling") or {}
    for sect, allowed, name in ((inp, _INPUT_KEYS, "input."), (out, _OUTPUT_KEYS, "output."),
                                (cpl, _COUPLING_KEYS, "coupling.")):
        if isinstance(sect, dict):
            _unknown(sect, allowed, name, issues)
        else:
            issues.append(("InvalidValue", f"{name[:-1]} must be a mapping"))
    inp = inp if isinstance(inp, dict) else {}
    out = out if isinstance(out, dict) else {}
    cpl = cpl if isinstance(cpl, dict) else {}

    in_levels = _levels(inp.get("levels"), "input.levels", _IN_LEVEL_KEYS, ("epsilon", "a"), issues)
    out_levels = _levels(out.get("levels"), "output.levels", _OUT_LEVEL_KEYS, ("E", "b"), issues)
    in_amps = _amplitude_map(inp.get("amplitudes"), {l[0] for l in in_levels}, "input.amplitudes", issues)
    out_amps = _amplitude_map(out.get("amplitudes"), {l[0] for l in out_levels}, "output.amplitudes", issues)

    for levels, kind in ((in_levels, "input"), (out_levels, "output")):
        if len(levels) < 2:
            issues.append(("EmptyRegister", f"{kind} register needs at least 2 levels, got {len(levels)}"))
        labs = [l[0] for l in levels]
        for lab in sorted({l for l in labs if labs.count(l) > 1}):
            issues.append(("DuplicateLabel", f"{kind} label {lab!r} appears more than once"))

    in_amps = _normalized(in_amps, "input", issues)
    out_amps = _normalized(out_amps, "output", issues)

    C = math.nan
    if "C" not in cpl:
        issues.append(("MissingKey", "coupling.C is required"))
    else:
        C = _number(cpl["C"], "coupling.C", issues)
        if math.isfinite(C) and C <= 0:
            issues.append(("NonPositiveCoupling", f"coupling.C must be positive, got {C!r}"))

    pairs = None
    if "pairs" in raw:
        pairs = []
        rp = raw["pairs"]
        if not isinstance(rp, list):
            issues.append(("InvalidValue", "pairs must be a list of [x, x'] pairs"))
        else:
            known = {l[0] for l in in_levels}
            for n, pr in enumerate(rp):
                if not isinstance(pr, (list, tuple)) or len(pr) != 2:
                    issues.append(("InvalidValue", f"pairs[{n}] must be [x, x']"))
                    continue
                x, xp = str(pr[0]), str(pr[1])
                for lab in (x, xp):
                    if lab not in known:
                        issues.append(("UnknownLabel", f"pairs[{n}] label {lab!r} is not an input level"))
                if x == xp:
                    issues.append(("InvalidPair", f"pairs[{n}] repeats label {x!r}"))
                pairs.append((x, xp))

    if issues:
        raise ScenarioError(issues)
    return Scenario.build(InputRegisterSpec.build(in_levels, in_amps),
                          OutputRegisterSpec.build(out_levels, out_amps), C, pairs)


def load_scenario(path) -> Scenario:
    """Read a YAML (or JSON) scenario file."""
    import yaml

    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ScenarioError([("ParseError", f"{path}: {exc}")]) from exc
    return validate_scenario(raw)


def _amp_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def scenario_to_dict(s: Scenario) -> dict:
    """Inverse of :func:`validate_scenario`."""
    return {
        "input": {
            "levels": [{"label": l.label, "epsilon": l.epsilon, "a": l.a} for l in s.input.levels],
            "amplitudes": {l.label: _amp_pair(c) for l, c in zip(s.input.levels, s.input.amplitudes)},
        },
        "output": {
            "levels": [{"label": l.label, "E": l.E, "b": l.b} for l in s.output.levels],
            "amplitudes": {l.label: _amp_pair(c) for l, c in zip(s.output.levels, s.output.initial_amplitudes)},
        },
        "coupling": {"C": s.C},
        "pairs": [list(p) for p in s.pairs],
    }


def random_scenario(rng: np.random.Generator, n_in: int, n_out: int, *,
                    spread: float = 5.0, coupling: tuple[float, float] = (0.2, 2.0),
                    pairs: Sequence[Pair] | None = None) -> Scenario:
    """Draw a scenario with spectra uniform on ``[-spread, spread]`` and
    Haar-like random register states."""
    def unit(n):
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        return v / np.linalg.norm(v)

    cx, d = unit(n_in), unit(n_out)
    eps, a = rng.uniform(-spread, spread, n_in), rng.uniform(-spread, spread, n_in)
    E, b = rng.uniform(-spread, spread, n_out), rng.uniform(-spread, spread, n_out)
    inp = InputRegisterSpec.build([(str(k), eps[k], a[k]) for k in range(n_in)],
                                  {str(k): cx[k] for k in range(n_in)})
    out = OutputRegisterSpec.build([(str(k), E[k], b[k]) for k in range(n_out)],
                                   {str(k): d[k] for k in range(n_out)})
    return Scenario.build(inp, out, rng.uniform(*coupling), pairs)
