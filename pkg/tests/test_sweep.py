import math
from pathlib import Path

import numpy as np
import pytest
import yaml

from entbound import reports
from entbound.bounds import bound_report, global_branch_sums
from entbound.errors import InfeasibleWeights, ScenarioError, SweepError
from entbound.spectral import scenario_to_dict
from entbound.sweep import (
    SweepRow,
    SweepSpec,
    build_kappa_family,
    load_sweep_spec,
    parse_sweep_spec,
    run_sweep,
    verify_monotonicity,
)

from conftest import make_scenario

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


class TestKappaFamily:
    def test_kappa_one_reproduces_symmetric_output(self):
        out = build_kappa_family(0.5, 1.0, 1.0, 1.0)
        assert sorted(zip(out.b.tolist(), np.round(out.weights, 15).tolist())) == [(-1.0, 0.5), (1.0, 0.5)]

    def test_kappa_zero(self):
        out = build_kappa_family(0.4, 1.0, 1.0, 0.0)
        pairs = dict(zip(out.labels, zip(out.b.tolist(), out.weights.tolist())))
        assert set(pairs) == {"plus", "zero"}
        assert pairs["plus"][1] == pytest.approx(0.4, abs=1e-15)
        assert pairs["zero"] == (0.0, pytest.approx(0.6, abs=1e-15))

    def test_branch_sums(self):
        for kappa in (0.0, 0.3, 1.0):
            s = make_scenario().replace(output=build_kappa_family(0.4, 2.0, 0.5, kappa))
            B1, B2 = global_branch_sums(s)
            assert B1 == pytest.approx(0.4, abs=1e-15)
            assert B2 == pytest.approx(kappa * 0.4, abs=1e-15)

    def test_infeasible(self):
        with pytest.raises(InfeasibleWeights):
            build_kappa_family(0.9, 1.0, 1.0, 1.0)
        with pytest.raises(InfeasibleWeights):
            build_kappa_family(0.4, 1.0, 1.0, 1.5)
        with pytest.raises(InfeasibleWeights):
            build_kappa_family(0.4, -1.0, 1.0, 0.5)


def kappa_spec(values=(0.0, 0.25, 0.5, 0.75, 1.0), **kw):
    return SweepSpec(make_scenario(pairs=[("0", "1")]), "kappa", tuple(values),
                     {"B1": 0.4, "b_plus": 1.0, "b_minus": 1.0}, **kw)


class TestRunSweep:
    def test_kappa_sweep_tau_decreasing(self):
        rows = run_sweep(kappa_spec())
        assert verify_monotonicity(rows, "tau_bound", "decreasing")
        # the b >= 0 weight outside "plus" is 0.6 in either orientation
        for r in rows:
            assert r.alpha == pytest.approx(0.6, abs=1e-14)
            expected = (1 - 2.4 / math.pi) * 2 * math.pi / (4 * 0.4 * (1 + r.param))
            assert r.tau_bound == pytest.approx(expected, rel=1e-13)

    def test_mean_interaction_vanishes_at_kappa_one(self):
        rows = run_sweep(kappa_spec())
        for r in rows:
            assert abs(r.mean_Hint - 0.5 * 0.4 * (1 - r.param)) < 1e-12
        assert rows[-1].mean_Hint == 0.0

    def test_coupling_sweep_scales_inversely(self, s1):
        rows = run_sweep(SweepSpec(s1, "coupling_C", (0.5, 1.0, 2.0, 4.0)))
        prod = [r.param * r.tau_bound for r in rows]
        assert max(prod) - min(prod) < 1e-14
        assert verify_monotonicity(rows, "tau_bound", "decreasing")

    def test_branch_sum_sweep(self):
        spec = SweepSpec(make_scenario(pairs=[("0", "1")]), "branch_sum", (0.2, 0.6, 0.9),
                         {"b_plus": 1.0, "b_minus": 1.0, "kappa": 0.5})
        rows = run_sweep(spec)
        for r in rows:
            assert r.B1 + r.B2 == pytest.approx(r.param, abs=1e-15)
        # small sums leave most weight at b = 0, so alpha exceeds the limit
        assert rows[0].tau_bound is None and rows[0].alpha is None
        for r in rows[1:]:
            alpha = 1 - r.param / 1.5
            assert r.tau_bound == pytest.approx((1 - 4 * alpha / math.pi) * 2 * math.pi / (4 * r.param), rel=1e-13)

    def test_with_tau_num(self):
        rows = run_sweep(kappa_spec(values=(1.0,), with_tau_num=True))
        # weights 0.4 on +1 and -1 with 0.2 at b = 0 give z = 0.2 + 0.8 cos t
        r = rows[0]
        # earliest |z| <= 1e-9 lies tol / |z'| ~ 1.3e-9 before the exact root
        assert abs(0.2 + 0.8 * math.cos(r.tau_num)) <= 1e-9
        assert r.tau_num == pytest.approx(math.acos(-0.25), abs=2e-9)
        assert r.tau_num >= r.tau_bound

    def test_infeasible_value_named(self):
        spec = SweepSpec(make_scenario(pairs=[("0", "1")]), "branch_sum", (1.0, 2.5),
                         {"b_plus": 1.0, "b_minus": 1.0, "kappa": 1.0})
        with pytest.raises(SweepError) as ei:
            run_sweep(spec)
        assert ei.value.value == 2.5

    def test_spec_checks(self, s1):
        with pytest.raises(SweepError):
            SweepSpec(s1, "temperature", (1.0, 2.0))
        with pytest.raises(SweepError):
            SweepSpec(s1, "coupling_C", (1.0, 1.0))
        with pytest.raises(SweepError):
            SweepSpec(s1, "coupling_C", (1.0, 2.0), outputs=("param", "nope"))
        with pytest.raises(SweepError):
            run_sweep(SweepSpec(s1, "kappa", (0.0, 0.5)))

    def test_csv_is_reproducible(self):
        a = reports.sweep_csv(run_sweep(kappa_spec()), kappa_spec().outputs)
        b = reports.sweep_csv(run_sweep(kappa_spec()), kappa_spec().outputs)
        assert a == b
        assert a.splitlines()[0] == "param,B1,B2,alpha,tau_bound,tau_num,mean_Hint,tau_ML,tau_MT"

    def test_input_energy_offset_does_not_change_bound(self):
        base = make_scenario(a=(0.0, 1.0, 2.5), eps=[0.1, -0.3, 0.8], pairs=[("0", "1"), ("1", "2")])
        moved = make_scenario(a=(0.0, 1.0, 2.5), eps=[7.4, 7.0, 8.1], pairs=[("0", "1"), ("1", "2")])
        spec_a = SweepSpec(base, "coupling_C", (0.5, 1.0, 2.0))
        spec_b = SweepSpec(moved, "coupling_C", (0.5, 1.0, 2.0))
        for ra, rb in zip(run_sweep(spec_a), run_sweep(spec_b)):
            assert ra.tau_bound == rb.tau_bound
            assert abs(ra.mean_Hint - rb.mean_Hint) < 1e-12


def _row(v, tau):
    return SweepRow(v, 0.0, 0.0, 0.0, tau, None, 0.0, None, None)


class TestMonotonicity:
    def test_pass_and_fail(self):
        rows = [_row(k, 1.0 / (k + 1)) for k in range(4)]
        assert verify_monotonicity(rows, "tau_bound", "decreasing")
        v = verify_monotonicity(rows, "tau_bound", "increasing")
        assert not v and v.first_violation == (0, 1)

    def test_constant_column_fails(self):
        v = verify_monotonicity([_row(k, 2.0) for k in range(3)], "tau_bound", "decreasing")
        assert not v.passed and v.first_violation == (0, 1)

    def test_missing_values_dropped(self):
        rows = [_row(0, 3.0), _row(1, None), _row(2, 1.0)]
        assert verify_monotonicity(rows, "tau_bound", "decreasing")

    def test_too_few(self):
        with pytest.raises(ValueError):
            verify_monotonicity([_row(0, 1.0)], "tau_bound", "decreasing")
        with pytest.raises(ValueError):
            verify_monotonicity([_row(0, 1.0), _row(1, 0.5)], "tau_bound", "sideways")


class TestSpecFiles:
    def test_shipped_spec(self):
        spec = load_sweep_spec(SCENARIOS / "kappa_sweep.yaml")
        assert spec.parameter == "kappa" and spec.values == (0.0, 0.25, 0.5, 0.75, 1.0)
        assert spec.family["B1"] == 0.4

    def test_inline_template(self, s1):
        raw = {"template": scenario_to_dict(s1), "parameter": "coupling_C", "values": [1, 2]}
        spec = parse_sweep_spec(raw)
        assert spec.template.C == 1.0 and spec.values == (1.0, 2.0)
        assert bound_report(spec.scenario_at(2.0)).tau_ent == pytest.approx((math.pi / 2 - 1) / 2)

    def test_bad_keys(self, s1):
        with pytest.raises(ScenarioError) as ei:
            parse_sweep_spec({"template": scenario_to_dict(s1), "parameter": "kappa", "values": [0],
                              "family": {"B": 1}})
        assert any("family.B" in m for _, m in ei.value.issues)
        with pytest.raises(ScenarioError):
            parse_sweep_spec({"parameter": "kappa", "values": [0]})

    def test_yaml_round_trip(self, tmp_path, s1):
        (tmp_path / "t.yaml").write_text(yaml.safe_dump(scenario_to_dict(s1)))
        (tmp_path / "sw.yaml").write_text(yaml.safe_dump(
            {"template_file": "t.yaml", "parameter": "coupling_C", "values": [1.0, 3.0]}))
        rows = run_sweep(load_sweep_spec(tmp_path / "sw.yaml"))
        assert rows[1].tau_bound == pytest.approx(rows[0].tau_bound / 3)
