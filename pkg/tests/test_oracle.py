import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entbound.amplitude import correlation_amplitude, overlap
from entbound.bounds import default_horizon, pair_bound
from entbound.errors import DegeneratePair, DimensionTooLarge, EmptyPairSet, ZeroAmplitude
from entbound.oracle import (
    composite_hamiltonian,
    first_zero_search,
    full_state,
    golden_section,
    overlap_via_oracle,
    scan_first_crossing,
    simultaneous_orthogonality_time,
)
from entbound.spectral import random_scenario

from conftest import designed_zero_scenario, make_scenario


class TestFullState:
    def test_product_state_at_zero(self):
        s = random_scenario(np.random.default_rng(1), 3, 4)
        st0 = full_state(s, 0.0)
        assert np.allclose(st0.matrix, np.outer(s.input.coefficients, s.output.d), atol=1e-15)

    def test_s1_half_period(self, s1):
        # shifted energies {1,1,2,0} -> phases exp(-i pi E) = {-1,-1,1,1}, amplitudes 1/2
        st_ = full_state(s1, math.pi)
        assert np.allclose(st_.matrix, 0.5 * np.array([[-1, -1], [1, 1]]), atol=1e-13)
        assert st_.amplitudes[("1", "1")] == pytest.approx(0.5, abs=1e-13)

    def test_norm_conserved(self):
        rng = np.random.default_rng(2)
        s = random_scenario(rng, 4, 5)
        for t in rng.uniform(0, 20, 50):
            assert abs(full_state(s, t).norm - 1.0) < 1e-12

    def test_hamiltonian_is_diagonal_in_product_basis(self):
        s = random_scenario(np.random.default_rng(3), 3, 3)
        H = composite_hamiltonian(s)
        assert np.count_nonzero(H - np.diag(np.diag(H))) == 0

    def test_dimension_limit(self):
        rng = np.random.default_rng(0)
        s = random_scenario(rng, 65, 64, pairs=[("0", "1")])
        with pytest.raises(DimensionTooLarge):
            full_state(s, 1.0)


class TestOracleOverlap:
    def test_s1_zero(self, s1):
        assert abs(overlap_via_oracle(s1, ("0", "1"), math.pi / 2)) < 1e-12

    def test_identity_at_zero(self):
        s = random_scenario(np.random.default_rng(4), 3, 3)
        assert overlap_via_oracle(s, ("0", "2"), 0.0) == pytest.approx(1.0, abs=1e-14)

    def test_random_4x4(self):
        rng = np.random.default_rng(5)
        s = random_scenario(rng, 4, 4)
        worst = 0.0
        for t in rng.uniform(0, 10, 20):
            for pr in s.pairs:
                worst = max(worst, abs(overlap_via_oracle(s, pr, t) - overlap(s, pr, t)))
        assert worst < 1e-10

    def test_zero_amplitude(self):
        s = make_scenario(cx=[1.0, 0.0])
        with pytest.raises(ZeroAmplitude):
            overlap_via_oracle(s, ("0", "1"), 1.0)

    @given(seed=st.integers(0, 2**32 - 1), n_in=st.integers(2, 8), n_out=st.integers(2, 8),
           t=st.floats(0, 10))
    @settings(max_examples=100, deadline=None)
    def test_equivalence_property(self, seed, n_in, n_out, t):
        rng = np.random.default_rng(seed)
        s = random_scenario(rng, n_in, n_out)
        pr = s.pairs[int(rng.integers(len(s.pairs)))]
        assert abs(overlap_via_oracle(s, pr, t) - overlap(s, pr, t)) < 1e-10


class TestGoldenSection:
    def test_parabola(self):
        x, fx, it = golden_section(lambda t: (t - 0.3) ** 2, -1.0, 2.0, 1e-12)
        assert x == pytest.approx(0.3, abs=1e-9) and fx < 1e-18 and it > 0

    def test_cosine_minimum(self):
        x, _, _ = golden_section(math.cos, 2.0, 4.0, 1e-12)
        assert x == pytest.approx(math.pi, abs=1e-6)


class TestFirstZero:
    def test_s1(self, s1):
        res = first_zero_search(s1, ("0", "1"), t_max=4.0, tol=1e-9)
        assert res.found
        assert res.tau_num == pytest.approx(math.pi / 2, abs=1e-9)
        assert abs(correlation_amplitude(s1, ("0", "1"), res.tau_num)) <= 1e-9
        assert res.min_location == pytest.approx(math.pi / 2, abs=1e-9)

    def test_no_zero_two_term(self):
        s = make_scenario(b=(2.0, -1.0), p=[0.3, 0.7])
        res = first_zero_search(s, ("0", "1"))
        assert not res.found and res.tau_num is None
        assert res.min_abs_z == pytest.approx(0.4, abs=1e-6)
        assert res.min_location == pytest.approx(math.pi / 3, abs=1e-6)

    def test_large_tolerance_gives_first_crossing(self, s1):
        res = first_zero_search(s1, ("0", "1"), t_max=4.0, tol=0.5)
        # earliest t with |cos t| <= 1/2
        assert res.tau_num == pytest.approx(math.pi / 3, abs=1e-9)

    def test_default_horizon(self, s1):
        res = first_zero_search(s1, ("0", "1"))
        assert res.t_max == pytest.approx(50 * (math.pi / 2 - 1))
        s = make_scenario(b=(1.0, 0.0, -1.0), p=[0.1, 0.8, 0.1], a=(0.0, 2.0), C=0.5)
        assert default_horizon(s, ("0", "1")) == pytest.approx(50.0)

    def test_degenerate(self):
        with pytest.raises(DegeneratePair):
            first_zero_search(make_scenario(a=(1.0, 1.0)), ("0", "1"), t_max=1.0)

    def test_argument_checks(self, s1):
        for kw in ({"t_max": 0.0}, {"tol": 0.0}, {"n_scan": 10}):
            with pytest.raises(ValueError):
                first_zero_search(s1, ("0", "1"), **{"t_max": 4.0, **kw})

    def test_designed_zero_is_found_at_analytic_time(self):
        rng = np.random.default_rng(44)
        for _ in range(10):
            s, delta = designed_zero_scenario(rng, 3, 3)
            for pr in s.pairs:
                da = abs(s.delta_a(pr))
                t0 = math.pi / (s.C * da * delta)
                res = first_zero_search(s, pr, t_max=1.5 * t0, tol=1e-9)
                assert res.found
                assert res.tau_num <= t0 + 1e-9
                assert res.tau_num >= pair_bound(s, pr).tau - 1e-9

    @given(seed=st.integers(0, 2**32 - 1), tols=st.tuples(st.floats(1e-9, 0.9), st.floats(1e-9, 0.9)))
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_tolerance(self, seed, tols):
        rng = np.random.default_rng(seed)
        s, delta = designed_zero_scenario(rng, 2, 2)
        pr = s.pairs[0]
        t_max = 1.2 * math.pi / (s.C * abs(s.delta_a(pr)) * delta)
        lo, hi = sorted(tols)
        r_lo = first_zero_search(s, pr, t_max=t_max, tol=lo, n_scan=20000)
        r_hi = first_zero_search(s, pr, t_max=t_max, tol=hi, n_scan=20000)
        if r_lo.found and r_hi.found:
            assert r_lo.tau_num >= r_hi.tau_num - 1e-12

    def test_crossing_satisfies_tolerance(self):
        res = scan_first_crossing(lambda t: np.abs(np.cos(t)), 10.0, 0.25, 5000, lipschitz=1.0)
        tau = res[0]
        assert abs(math.cos(tau)) <= 0.25
        assert tau == pytest.approx(math.acos(0.25), abs=1e-10)


class TestSimultaneous:
    def test_single_pair_reduces(self, s1):
        res = simultaneous_orthogonality_time(s1, tol=1e-9, t_max=4.0)
        assert res.tau_num == pytest.approx(math.pi / 2, abs=1e-9)

    def test_incommensurate_pairs(self):
        # da = 1 and da = sqrt(2): zeros at pi/2 (2k+1) and pi/(2 sqrt 2) (2k+1) never coincide
        s = make_scenario(a=(0.0, 1.0, math.sqrt(2.0)), p=[0.5, 0.5], pairs=[("0", "1"), ("0", "2")])
        res = simultaneous_orthogonality_time(s, tol=1e-9, t_max=20.0)
        assert res.tau_num is None

    def test_common_zero(self):
        # da = 1 and da = 3: cos t and cos 3t both vanish at pi/2
        s = make_scenario(a=(0.0, 1.0, 3.0), p=[0.5, 0.5], pairs=[("0", "1"), ("0", "2")])
        res = simultaneous_orthogonality_time(s, tol=1e-9, t_max=4.0)
        assert res.tau_num == pytest.approx(math.pi / 2, abs=1e-9)

    def test_empty(self, s1):
        with pytest.raises(EmptyPairSet):
            simultaneous_orthogonality_time(s1.replace(pairs=()))
