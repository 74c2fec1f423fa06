"""Minimum-time bounds for entanglement formation and reference speed limits.

For a canonically ordered pair the inequality

    cos u >= 1 - (2/pi) (u + sin u),   u >= 0,

applied term by term to ``Re z`` gives, with ``h = 2 pi``,

    Re z + (2/pi) Im z >= 1 - 4 alpha/pi - (4/h) C da (B1 + B2) t,

so ``z`` cannot vanish before

    tau = (1 - 4 alpha/pi) h / (4 C da (B1 + B2)),

which is positive only while ``alpha < pi/4``.  ``z`` and ``conj(z)`` share
their zeros, and conjugation swaps the two branches, so both orientations
are tried and the larger bound is kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .amplitude import correlation_amplitude
from .errors import DegeneratePair, EmptyPairSet, NoApplicablePair, ZeroMeanEnergy, ZeroSpread
from .spectral import PLANCK, BranchSplit, Pair, Scenario, branch_split, canonical_pair, composite_energies

ALPHA_LIMIT = math.pi / 4
VIOLATION_TOL = 1e-9
# relative floor below which <H> or Delta H count as zero
ENERGY_FLOOR = 1e-12


def bound_from_split(split: BranchSplit, C: float) -> float | None:
    """Closed-form bound for one orientation, or ``None`` when ``alpha >= pi/4``."""
    alpha = split.alpha
    if not alpha < ALPHA_LIMIT:
        return None
    return (1.0 - 4.0 * alpha / math.pi) * PLANCK / (4.0 * C * split.delta_a * (split.B1 + split.B2))


@dataclass(frozen=True)
class PairBound:
    """Bound for one pair.

    ``alpha``, ``B1`` and ``B2`` belong to the reported ``orientation``
    (``"direct"`` or ``"conjugate"``), so ``tau`` can be recomputed from the
    record alone.  ``tau`` is ``None`` when the pair is not applicable.
    """

    pair: Pair
    delta_a: float | None
    alpha: float | None
    B1: float | None
    B2: float | None
    tau: float | None
    orientation: str | None
    applicable: bool
    reason: str = ""

    @property
    def degenerate(self) -> bool:
        return self.reason == "DegeneratePair"


def pair_bound(s: Scenario, pair) -> PairBound:
    direct = branch_split(s, pair)
    options = [("direct", direct), ("conjugate", direct.conjugate())]
    best = None
    for name, split in options:
        tau = bound_from_split(split, s.C)
        if tau is not None and tau > 0 and (best is None or tau > best[0]):
            best = (tau, name, split)
    if best is None:
        return PairBound(direct.pair, direct.delta_a, direct.alpha, direct.B1, direct.B2,
                         None, None, False, "NotApplicable")
    tau, name, split = best
    return PairBound(split.pair, split.delta_a, split.alpha, split.B1, split.B2, tau, name, True)


def _pair_bound_or_flag(s: Scenario, pair) -> PairBound:
    try:
        return pair_bound(s, pair)
    except DegeneratePair:
        p = (str(pair[0]), str(pair[1]))
        return PairBound(p, 0.0, None, None, None, None, None, False, "DegeneratePair")


# ---------------------------------------------------------------------------
# energy averages and reference limits
# ---------------------------------------------------------------------------

def _composite_weights(s: Scenario) -> np.ndarray:
    return np.outer(s.input.probabilities, s.output.weights)


def mean_input_observable(s: Scenario) -> float:
    return math.fsum(s.input.probabilities * s.input.a)


def mean_output_observable(s: Scenario) -> float:
    return math.fsum(s.output.weights * s.output.b)


def global_branch_sums(s: Scenario) -> tuple[float, float]:
    """``(B1, B2)`` of the whole output spectrum, independent of any pair."""
    p, b = s.output.weights, s.output.b
    return math.fsum(p[b > 0] * b[b > 0]), math.fsum(p[b < 0] * -b[b < 0])


def interaction_average(s: Scenario) -> float:
    """``<H_int> = C <A_I> <B_O>`` in the initial product state."""
    return s.C * mean_input_observable(s) * mean_output_observable(s)


def mean_energy(s: Scenario) -> float:
    """Average energy measured from the composite ground level."""
    return math.fsum((_composite_weights(s) * composite_energies(s).shifted).ravel())


def energy_spread(s: Scenario) -> float:
    w = _composite_weights(s).ravel()
    E = composite_energies(s).shifted.ravel()
    mu = math.fsum(w * E)
    return math.sqrt(max(math.fsum(w * (E - mu) ** 2), 0.0))


def _scale(s: Scenario) -> float:
    return max(1.0, float(np.max(np.abs(composite_energies(s).shifted))))


def margolus_levitin(s: Scenario) -> float:
    """``h / (4 <H>)`` with ``<H>`` taken above the ground level."""
    mean = mean_energy(s)
    if mean <= ENERGY_FLOOR * _scale(s):
        raise ZeroMeanEnergy("average energy above the ground level is zero; the state is stationary")
    return PLANCK / (4.0 * mean)


def mandelstam_tamm(s: Scenario) -> float:
    """``pi / (2 Delta H)`` (hbar = 1)."""
    spread = energy_spread(s)
    if spread <= ENERGY_FLOOR * _scale(s):
        raise ZeroSpread("energy spread is zero; the state is an energy eigenstate")
    return math.pi / (2.0 * spread)


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    pairs: tuple[PairBound, ...]
    tau_ent: float | None
    mean_A: float
    mean_B: float
    mean_Hint: float
    mean_H_shifted: float
    spread_H: float
    tau_ML: float | None
    tau_MT: float | None
    notes: tuple[str, ...] = field(default=())

    @property
    def binding_pair(self) -> PairBound | None:
        """The applicable pair whose bound attains ``tau_ent``."""
        best = None
        for pb in self.pairs:
            if pb.applicable and (best is None or pb.tau > best.tau):
                best = pb
        return best


def bound_report(s: Scenario) -> BoundReport:
    """Everything :func:`entanglement_bound` reports, without raising when no
    pair is applicable (``tau_ent`` is ``None`` then)."""
    if not s.pairs:
        raise EmptyPairSet("scenario designates no pairs")
    pbs = tuple(_pair_bound_or_flag(s, pr) for pr in s.pairs)
    taus = [pb.tau for pb in pbs if pb.applicable]
    notes = []
    try:
        tau_ml = margolus_levitin(s)
    except ZeroMeanEnergy as exc:
        tau_ml = None
        notes.append(f"{exc.code}: {exc}")
    try:
        tau_mt = mandelstam_tamm(s)
    except ZeroSpread as exc:
        tau_mt = None
        notes.append(f"{exc.code}: {exc}")
    if not taus:
        notes.append("NoApplicablePair: no designated pair admits a positive bound")
    return BoundReport(
        pairs=pbs,
        tau_ent=max(taus) if taus else None,
        mean_A=mean_input_observable(s),
        mean_B=mean_output_observable(s),
        mean_Hint=interaction_average(s),
        mean_H_shifted=mean_energy(s),
        spread_H=energy_spread(s),
        tau_ML=tau_ml,
        tau_MT=tau_mt,
        notes=tuple(notes),
    )


def entanglement_bound(s: Scenario) -> BoundReport:
    """Supremum of the per-pair bounds over the designated pairs.

    Degenerate and non-applicable pairs are flagged in the report and left
    out of the supremum; if nothing is left :class:`NoApplicablePair` is
    raised with the report attached.
    """
    report = bound_report(s)
    if report.tau_ent is None:
        raise NoApplicablePair("no designated pair admits a positive bound", report)
    return report


# ---------------------------------------------------------------------------
# pointwise check of the underlying inequality
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class InequalityCheck:
    pair: Pair
    t: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray

    @property
    def margin(self) -> np.ndarray:
        return self.lhs - self.rhs

    @property
    def violations(self) -> list[tuple[float, float, float, float]]:
        bad = np.flatnonzero(self.margin < -VIOLATION_TOL)
        return [self[k] for k in bad]

    def __len__(self):
        return len(self.t)

    def __getitem__(self, k):
        return float(self.t[k]), float(self.lhs[k]), float(self.rhs[k]), float(self.margin[k])

    def __iter__(self) -> Iterator[tuple[float, float, float, float]]:
        return (self[k] for k in range(len(self)))


def check_branch_inequality(s: Scenario, pair, grid) -> InequalityCheck:
    """Evaluate both sides of the branch inequality on ``grid``.

    Uses the direct orientation of the canonically ordered pair.
    """
    t = np.asarray(grid, dtype=float)
    if np.any(t < 0):
        raise ValueError("grid times must be non-negative")
    split = branch_split(s, pair)
    z = np.asarray(correlation_amplitude(s, split.pair, t))
    lhs = z.real + (2.0 / math.pi) * z.imag
    rhs = (1.0 - 4.0 * split.alpha / math.pi
           - (4.0 / PLANCK) * s.C * split.delta_a * (split.B1 + split.B2) * t)
    return InequalityCheck(split.pair, t, np.atleast_1d(lhs), np.atleast_1d(rhs))


def default_horizon(s: Scenario, pair) -> float:
    """Search horizon: 50 bounds when applicable, else ``50 / (C da max|b|)``."""
    pb = pair_bound(s, pair)
    if pb.applicable:
        return 50.0 * pb.tau
    _, da = canonical_pair(s, pair)
    bmax = float(np.max(np.abs(s.output.b)))
    if bmax == 0.0:
        return 50.0
    return 50.0 / (s.C * da * bmax)
