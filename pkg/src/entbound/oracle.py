"""Brute-force evolution of the composite system and first-zero searches.

:func:`full_state` does not reuse the closed-form phases of
:mod:`entbound.amplitude`: it assembles the dense Hamiltonian from Kronecker
products, finds the ground level by numerical diagonalization and propagates
with a matrix exponential.  That makes it an independent check of the
engine on small systems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from .amplitude import correlation_amplitude
from .bounds import default_horizon
from .errors import DimensionTooLarge, EmptyPairSet, ZeroAmplitude
from .spectral import Label, Pair, Scenario, canonical_pair

MAX_DIMENSION = 4096
DEFAULT_TOL = 1e-9
DEFAULT_N_SCAN = 100_000
MIN_N_SCAN = 1000
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
# refined minima within this of the best count as ties (earliest wins)
TIE_TOL = 1e-12
# scan minima this close to the scan minimum are refined for diagnostics
DIAG_SLACK = 1e-6


@dataclass(frozen=True, eq=False)
class CompositeState:
    input_labels: tuple[Label, ...]
    output_labels: tuple[Label, ...]
    t: float
    matrix: np.ndarray  # [input, output]

    @property
    def dimension(self) -> int:
        return self.matrix.size

    @property
    def amplitudes(self) -> dict[tuple[Label, Label], complex]:
        return {(x, i): complex(self.matrix[k, j]) for k, x in enumerate(self.input_labels)
                for j, i in enumerate(self.output_labels)}

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix))


def composite_hamiltonian(s: Scenario) -> np.ndarray:
    """Dense ``H_I x 1 + 1 x H_O + C A_I x B_O`` in the product basis."""
    n_in, n_out = len(s.input.levels), len(s.output.levels)
    if n_in * n_out > MAX_DIMENSION:
        raise DimensionTooLarge(f"composite dimension {n_in * n_out} exceeds {MAX_DIMENSION}")
    H_I, A_I = np.diag(s.input.epsilon), np.diag(s.input.a)
    H_O, B_O = np.diag(s.output.E), np.diag(s.output.b)
    return (np.kron(H_I, np.eye(n_out)) + np.kron(np.eye(n_in), H_O)
            + s.C * np.kron(A_I, B_O))


def full_state(s: Scenario, t: float) -> CompositeState:
    """``U(t) sum_x C_x |x>|0>`` with energies measured from the ground level."""
    if t < 0:
        raise ValueError("t must be non-negative")
    H = composite_hamiltonian(s)
    ground = float(np.linalg.eigvalsh(H)[0])
    psi0 = np.kron(s.input.coefficients, s.output.d)
    U = scipy.linalg.expm(-1j * float(t) * (H - ground * np.eye(len(H))))
    psi = U @ psi0
    return CompositeState(s.input.labels, s.output.labels, float(t),
                          psi.reshape(len(s.input.levels), len(s.output.levels)))


def conditional_from_full(state: CompositeState, s: Scenario, x) -> np.ndarray:
    """Output vector correlated with ``|x>``, divided by ``C_x``."""
    k = s.input.index(x)
    cx = s.input.amplitudes[k]
    if abs(cx) == 0.0:
        raise ZeroAmplitude(f"input amplitude C_{x} is zero; |f(x,t)> cannot be extracted")
    return state.matrix[k] / cx


def overlap_via_oracle(s: Scenario, pair, t: float) -> complex:
    """``<f(x',t)|f(x,t)>`` read off the brute-force composite state."""
    x, xp = pair
    st = full_state(s, t)
    return complex(np.vdot(conditional_from_full(st, s, xp), conditional_from_full(st, s, x)))


# ---------------------------------------------------------------------------
# first-zero search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FirstZeroResult:
    """Outcome of a first epsilon-orthogonality search.

    ``tau_num`` is the earliest time found with ``|z| <= tolerance`` (``None``
    when no such time was found).  ``min_abs_z``/``min_location`` describe
    the refined minimum that certified the zero, or the global minimum of the
    scan otherwise.
    """

    pair: Pair | None
    tau_num: float | None
    min_abs_z: float
    min_location: float
    tolerance: float
    t_max: float
    scan_points: int
    refinement_iterations: int

    @property
    def found(self) -> bool:
        return self.tau_num is not None


def golden_section(f: Callable[[float], float], a: float, b: float, width: float) -> tuple[float, float, int]:
    """Minimize unimodal ``f`` on ``[a, b]`` until the bracket is narrower
    than ``width``.  Returns ``(x, f(x), iterations)``."""
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while b - a > width:
        it += 1
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
        if it > 500:
            break
    best = min(((fc, c), (fd, d), (f(a), a), (f(b), b)))
    return best[1], best[0], it


def _crossing(f, lo: float, hi: float, tol: float, width: float) -> tuple[float, int]:
    """Bisect for the point where ``f`` drops to ``tol``; ``f(lo) > tol >= f(hi)``.

    The returned point always satisfies ``f <= tol``.
    """
    it = 0
    while hi - lo > width and it < 200:
        it += 1
        mid = 0.5 * (lo + hi)
        if f(mid) <= tol:
            hi = mid
        else:
            lo = mid
    return hi, it


def _local_minima(v: np.ndarray) -> np.ndarray:
    n = len(v)
    left = np.empty(n, dtype=bool)
    right = np.empty(n, dtype=bool)
    left[0] = True
    left[1:] = v[1:] <= v[:-1]
    right[-1] = True
    right[:-1] = v[:-1] <= v[1:]
    mins = np.flatnonzero(left & right)
    # drop interior points of flat stretches
    keep = [k for k in mins if k == 0 or v[k] < v[k - 1] or k == n - 1 or v[k] < v[k + 1]]
    return np.asarray(keep if keep else mins[:1], dtype=int)


def scan_first_crossing(f_vec: Callable, t_max: float, tol: float, n_scan: int, lipschitz: float = 0.0):
    """Earliest ``t`` in ``[0, t_max]`` with ``f(t) <= tol`` for a smooth,
    non-negative ``f``.

    ``f`` is sampled on ``n_scan`` uniform points.  Sampled local minima
    below ``10 * tol + lipschitz * h`` (``h`` the grid step) are refined by
    golden section down to ``1e-12 * t_max``; for the first one that reaches
    ``tol`` the descending crossing is located by bisection.  ``lipschitz``
    bounds ``|f'|`` so that dips between samples are not skipped.

    Returns ``(tau or None, min_value, min_location, iterations, grid, values)``.
    """
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if n_scan < MIN_N_SCAN:
        raise ValueError(f"n_scan must be at least {MIN_N_SCAN}")
    grid = np.linspace(0.0, t_max, n_scan)
    vals = np.asarray(f_vec(grid), dtype=float)
    f = lambda t: float(f_vec(np.asarray(t, dtype=float)))
    width = 1e-12 * t_max
    iters = 0

    if vals[0] <= tol:
        return 0.0, float(vals[0]), 0.0, 0, grid, vals

    minima = _local_minima(vals)
    threshold = 10.0 * tol + lipschitz * (grid[1] - grid[0])
    for k in minima[vals[minima] <= threshold]:
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, n_scan - 1)]
        m, fm, it = golden_section(f, lo, hi, width)
        iters += it
        if fm > tol:
            continue
        if vals[k] <= tol:
            j = k
            while vals[j] <= tol:
                j -= 1
            lo, hi = grid[j], grid[j + 1]
        else:
            # only the refined minimum dips below tol
            lo, hi = (grid[k], m) if m >= grid[k] else (grid[k - 1], m)
        tau, it = _crossing(f, lo, hi, tol, width)
        iters += it
        return float(tau), float(fm), float(m), iters, grid, vals

    # nothing certified: report the earliest global minimum
    cand = minima[vals[minima] <= vals[minima].min() + DIAG_SLACK]
    refined = []
    for k in cand:
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, n_scan - 1)]
        m, fm, it = golden_section(f, lo, hi, width)
        iters += it
        refined.append((fm, m))
    best = min(fm for fm, _ in refined)
    fm, m = min(((fm, m) for fm, m in refined if fm <= best + TIE_TOL), key=lambda r: r[1])
    return None, float(fm), float(m), iters, grid, vals


def _rate_bound(s: Scenario, pair) -> float:
    """Upper bound on ``|d|z|/dt|``: the largest phase frequency."""
    return s.C * abs(s.delta_a(pair)) * float(np.max(np.abs(s.output.b)))


def first_zero_search(s: Scenario, pair, t_max: float | None = None, tol: float = DEFAULT_TOL,
                      n_scan: int = DEFAULT_N_SCAN, *, return_scan: bool = False):
    """Earliest time at which ``|z_xx'(t)| <= tol`` on ``[0, t_max]``.

    ``t_max`` defaults to :func:`entbound.bounds.default_horizon`.  With
    ``return_scan`` the sampled grid and ``|z|`` values come back too.
    """
    cp, _ = canonical_pair(s, pair)
    if t_max is None:
        t_max = default_horizon(s, cp)
    f = lambda t: np.abs(correlation_amplitude(s, cp, t))
    tau, fm, m, iters, grid, vals = scan_first_crossing(f, t_max, tol, n_scan, _rate_bound(s, cp))
    res = FirstZeroResult(cp, tau, fm, m, tol, float(t_max), n_scan, iters)
    return (res, grid, vals) if return_scan else res


def simultaneous_orthogonality_time(s: Scenario, tol: float = DEFAULT_TOL, t_max: float | None = None,
                                    n_scan: int = DEFAULT_N_SCAN) -> FirstZeroResult:
    """Earliest time at which every designated pair has ``|z| <= tol``.

    Works on ``max_pairs |z|``; ``tau_num`` is ``None`` when no common time
    is found on ``[0, t_max]``.
    """
    if not s.pairs:
        raise EmptyPairSet("scenario designates no pairs")
    pairs = [canonical_pair(s, pr)[0] for pr in s.pairs]
    if t_max is None:
        t_max = max(default_horizon(s, pr) for pr in pairs)

    def f(t):
        out = np.abs(correlation_amplitude(s, pairs[0], t))
        for pr in pairs[1:]:
            out = np.maximum(out, np.abs(correlation_amplitude(s, pr, t)))
        return out

    lip = max(_rate_bound(s, pr) for pr in pairs)
    tau, fm, m, iters, _, _ = scan_first_crossing(f, t_max, tol, n_scan, lip)
    return FirstZeroResult(None, tau, fm, m, tol, float(t_max), n_scan, iters)
