"""Conditional output states, correlation amplitudes and overlaps.

The evolution is a pure phase map in the product eigenbasis, so every
quantity here is a finite weighted sum of complex exponentials

    z(t) = sum_i p_i exp(-i * omega_i * t),   omega_i = C * (a_x - a_x') * b_i.

Sums run over output levels in ascending label order.  Above
``COMPENSATE_ABOVE`` terms a Neumaier-compensated accumulation is used so
long spectra still give bit-reproducible traces.

Overlaps follow the decoherence-theory convention ``D_xx' = <f(x')|f(x)>``,
which is the combination entering the reduced density-matrix element
``rho_xx' = C_x C_x'^* z_xx'``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import MissingRate
from .spectral import (
    Label,
    Scenario,
    branch_split,
    canonical_pair,
    composite_energies,
    label_key,
)

COMPENSATE_ABOVE = 1000


def phase_sum(weights, freqs, t):
    """``sum_k weights[k] * exp(-1j * freqs[k] * t)`` for scalar or array ``t``.

    Terms are accumulated in the given order; compensated when there are more
    than ``COMPENSATE_ABOVE`` of them.
    """
    w = np.asarray(weights, dtype=complex)
    f = np.asarray(freqs, dtype=float)
    tt = np.asarray(t, dtype=float)
    acc = np.zeros(tt.shape, dtype=complex)
    if len(w) > COMPENSATE_ABOVE:
        comp = np.zeros(tt.shape, dtype=complex)
        for wk, fk in zip(w, f):
            term = wk * np.exp(-1j * fk * tt)
            # Neumaier on real and imaginary parts separately
            s = acc + term
            big = np.abs(acc.real) >= np.abs(term.real)
            cr = np.where(big, (acc.real - s.real) + term.real, (term.real - s.real) + acc.real)
            big = np.abs(acc.imag) >= np.abs(term.imag)
            ci = np.where(big, (acc.imag - s.imag) + term.imag, (term.imag - s.imag) + acc.imag)
            comp += cr + 1j * ci
            acc = s
        acc = acc + comp
    else:
        for wk, fk in zip(w, f):
            acc += wk * np.exp(-1j * fk * tt)
    return acc[()] if acc.ndim == 0 else acc


@dataclass(frozen=True, eq=False)
class ConditionalOutputState:
    """Components of ``|f(x,t)>_O`` in the output eigenbasis."""

    x: Label
    t: float
    labels: tuple[Label, ...]
    vector: np.ndarray

    @property
    def amplitudes(self) -> dict[Label, complex]:
        return {i: complex(v) for i, v in zip(self.labels, self.vector)}

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))


@dataclass(frozen=True, eq=False)
class OverlapTrace:
    pair: tuple[Label, Label]
    times: np.ndarray
    D_values: np.ndarray
    z_values: np.ndarray

    @property
    def abs_z(self) -> np.ndarray:
        return np.abs(self.z_values)


def _check_time(t):
    if np.any(np.asarray(t) < 0):
        raise ValueError("times must be non-negative")


def conditional_output_state(s: Scenario, x, t: float, *, shifted: bool = True) -> ConditionalOutputState:
    """``|f(x,t)>`` with components ``exp(-i t E_xi) d_i``.

    With ``shifted`` (the default) energies are measured from the composite
    ground level; this only changes a global phase.
    """
    _check_time(t)
    k = s.input.index(x)
    table = composite_energies(s)
    energies = table.shifted[k] if shifted else table.raw[k]
    vec = np.exp(-1j * float(t) * energies) * s.output.d
    return ConditionalOutputState(s.input.labels[k], float(t), s.output.labels, vec)


def _freqs(s: Scenario, pair) -> np.ndarray:
    canonical_pair(s, pair)  # raises DegeneratePair
    return s.C * s.delta_a(pair) * s.output.b


def correlation_amplitude(s: Scenario, pair, t):
    """``z_xx'(t) = sum_i p_i exp(-i C t (a_x - a_x') b_i)``.

    The pair is used in the order given; swapping it conjugates ``z``.
    """
    _check_time(t)
    return phase_sum(s.output.weights, _freqs(s, pair), t)


def branch_components(s: Scenario, pair, t):
    """``(z1, z2)`` from the non-negative and negative ``b`` branches.

    The pair is put in canonical order (``a_x > a_x'``) first, so
    ``z1 + z2`` equals the canonical-order correlation amplitude.
    """
    _check_time(t)
    split = branch_split(s, pair)
    w = s.C * split.delta_a
    z1 = phase_sum([p for p, _ in split.branch1], [w * b for _, b in split.branch1], t)
    z2 = phase_sum([p for p, _ in split.branch2], [-w * beta for _, beta in split.branch2], t)
    if not split.branch2:
        z2 = np.zeros_like(np.asarray(t, dtype=float), dtype=complex)[()]
    return z1, z2


def overlap(s: Scenario, pair, t):
    """``D_xx'(t) = exp(-i t (eps_x - eps_x')) z_xx'(t)``."""
    x, xp = pair
    de = s.input.levels[s.input.index(x)].epsilon - s.input.levels[s.input.index(xp)].epsilon
    z = correlation_amplitude(s, pair, t)
    return np.exp(-1j * np.asarray(t, dtype=float) * de) * z


def reduced_offdiagonal(s: Scenario, pair, t):
    """Off-diagonal element ``C_x C_x'^* z_xx'(t)`` of the reduced state."""
    x, xp = pair
    cx = s.input.amplitudes[s.input.index(x)]
    cxp = s.input.amplitudes[s.input.index(xp)]
    return cx * np.conj(cxp) * correlation_amplitude(s, pair, t)


def overlap_trace(s: Scenario, pair, times: Sequence[float]) -> OverlapTrace:
    tt = np.asarray(times, dtype=float)
    _check_time(tt)
    z = np.atleast_1d(correlation_amplitude(s, pair, tt))
    D = np.atleast_1d(overlap(s, pair, tt))
    return OverlapTrace((str(pair[0]), str(pair[1])), tt, D, z)


# ---------------------------------------------------------------------------
# generalized diagonal phase model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneralizedPhaseModel:
    """Constant phase rates ``Lambda[(x, i)]`` of a product-diagonal Hamiltonian.

    The accumulated phase of ``|x>|i>`` after time ``t`` is ``Lambda * t``.
    """

    rates: Mapping[tuple[Label, Label], float]

    @classmethod
    def from_scenario(cls, s: Scenario) -> "GeneralizedPhaseModel":
        raw = composite_energies(s).raw
        return cls({(x, i): float(raw[k, j]) for k, x in enumerate(s.input.labels)
                    for j, i in enumerate(s.output.labels)})

    @classmethod
    def from_terms(cls, terms: Sequence[tuple[float, Mapping, Mapping]],
                   epsilon: Mapping[Label, float], energies: Mapping[Label, float]) -> "GeneralizedPhaseModel":
        """Rates ``sum_k C_k a_kx b_ki + eps_x + E_i`` of a multi-term coupling.

        ``terms`` is a list of ``(C_k, a_k, b_k)`` with ``a_k`` keyed by input
        label and ``b_k`` by output label.
        """
        rates = {}
        for x, ex in epsilon.items():
            for i, Ei in energies.items():
                rates[(str(x), str(i))] = ex + Ei + sum(Ck * ak[x] * bk[i] for Ck, ak, bk in terms)
        return cls(rates)

    def rate(self, x, i) -> float:
        try:
            return self.rates[(x, i)]
        except KeyError:
            raise MissingRate(f"no phase rate for (x={x!r}, i={i!r})") from None

    def phase(self, x, i, t):
        return self.rate(x, i) * np.asarray(t, dtype=float)


@dataclass(frozen=True)
class PhaseSchedule:
    """Piecewise-constant sequence of phase models.

    ``segments`` holds ``(duration, model)``; the last model stays in force
    after its segment ends.  Phases add up segment by segment.
    """

    segments: tuple[tuple[float, GeneralizedPhaseModel], ...]

    def __post_init__(self):
        if not self.segments:
            raise ValueError("schedule needs at least one segment")
        if any(d <= 0 for d, _ in self.segments):
            raise ValueError("segment durations must be positive")

    def phase(self, x, i, t):
        tt = np.asarray(t, dtype=float)
        total = np.zeros(tt.shape)
        start = 0.0
        last = len(self.segments) - 1
        for n, (dur, model) in enumerate(self.segments):
            span = tt - start if n == last else np.clip(tt - start, 0.0, dur)
            total = total + model.rate(x, i) * np.maximum(span, 0.0)
            start += dur
        return total[()] if total.ndim == 0 else total


def generalized_amplitude(model, weights: Mapping[Label, float], pair, t):
    """``sum_i p_i exp(-i (Phi_xi(t) - Phi_x'i(t)))`` for a diagonal phase model.

    ``model`` is a :class:`GeneralizedPhaseModel` or :class:`PhaseSchedule`.
    With identical ``eps_x`` and ``eps_x'`` this is the correlation amplitude;
    otherwise it carries the extra ``exp(-i t (eps_x - eps_x'))`` of the overlap.
    """
    x, xp = str(pair[0]), str(pair[1])
    _check_time(t)
    acc = np.zeros(np.shape(t), dtype=complex)
    for i in sorted(weights, key=lambda lab: label_key(str(lab))):
        acc = acc + weights[i] * np.exp(-1j * (model.phase(x, i, t) - model.phase(xp, i, t)))
    return acc[()] if acc.ndim == 0 else acc

