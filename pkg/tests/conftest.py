import math

import numpy as np
import pytest

from entbound.spectral import InputRegisterSpec, OutputRegisterSpec, Scenario, random_scenario

R2 = 1.0 / math.sqrt(2.0)

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make_scenario(a=(0.0, 1.0), b=(1.0, -1.0), p=None, C=1.0, eps=None, E=None, cx=None, pairs=None):
    """Small scenario builder with integer-string labels."""
    n_in, n_out = len(a), len(b)
    eps = [0.0] * n_in if eps is None else eps
    E = [0.0] * n_out if E is None else E
    cx = [1.0 / math.sqrt(n_in)] * n_in if cx is None else cx
    p = [1.0 / n_out] * n_out if p is None else p
    inp = InputRegisterSpec.build([(str(k), eps[k], a[k]) for k in range(n_in)],
                                  {str(k): cx[k] for k in range(n_in)})
    out = OutputRegisterSpec.build([(str(k), E[k], b[k]) for k in range(n_out)],
                                   {str(k): math.sqrt(p[k]) for k in range(n_out)})
    return Scenario.build(inp, out, C, pairs)


@pytest.fixture
def s1():
    """Uniform two-level input a={0,1}; output b={+1,-1}, p={1/2,1/2}; C=1."""
    return make_scenario(cx=[R2, R2], p=[0.5, 0.5], pairs=[("0", "1")])


def designed_zero_scenario(rng, n_in, n_out_pairs, spread=5.0):
    """Random scenario whose output levels come in equal-weight pairs
    ``m_k +- delta/2`` sharing one splitting ``delta``.

    Then ``z`` carries the factor ``cos(C da delta t / 2)`` and vanishes
    exactly at ``t = pi / (C |da| delta)`` for every pair.
    """
    base = random_scenario(rng, n_in, 2, spread=spread)
    delta = rng.uniform(0.5, 4.0)
    centers = rng.uniform(-spread + delta / 2, spread - delta / 2, n_out_pairs)
    w = rng.dirichlet(np.ones(n_out_pairs))
    levels, amps = [], {}
    for k, m in enumerate(centers):
        for sgn, tag in ((+1, "h"), (-1, "l")):
            lab = f"{k}{tag}"
            levels.append((lab, rng.uniform(-spread, spread), m + sgn * delta / 2))
            amps[lab] = math.sqrt(w[k] / 2) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    out = OutputRegisterSpec.build(levels, amps)
    return base.replace(output=out), delta


def corpus(seed=2024, n_random=60, n_designed=40):
    """Mixed corpus of randomized scenarios, dimensions at most 8 x 8."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n_random):
        out.append(random_scenario(rng, int(rng.integers(2, 9)), int(rng.integers(2, 9))))
    for _ in range(n_designed):
        s, _ = designed_zero_scenario(rng, int(rng.integers(2, 9)), int(rng.integers(1, 5)))
        out.append(s)
    return out
