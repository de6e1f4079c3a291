import math

import pytest

import lrclab as lrc


def test_torus_geometry():
    spec = lrc.TorusSpec(d=2, m=5, norm_p=1.0)
    assert spec.volume() == 25
    assert lrc.wrap([-1, 5], spec) == [4, 0]
    assert lrc.torus_distance([0, 0], [3, 4], spec) == pytest.approx(3.0)
    pts = lrc.nearest_nonzero(lrc.TorusSpec(d=2, m=5, norm_p=float("inf")), 8)
    assert all(d == pytest.approx(1.0) for _, d in pts)


def test_rates_and_displacements():
    params = lrc.ModelParams(d=1, m=5, lambda_plus=lrc.ParamFamily.constant(2.0))
    rates = lrc.total_rates(params)
    assert rates.r_minus == pytest.approx(4.0)
    assert rates.r_plus == pytest.approx(8.0)
    assert rates.z == pytest.approx(2.0)
    assert rates.c_n == pytest.approx(math.log(5.0))

    probs = lrc.displacement_probabilities(
        lrc.ModelParams(d=1, m=5, alpha_minus=lrc.ParamFamily.constant(1.0),
                        alpha_plus=lrc.ParamFamily.constant(1.0)),
        "minus",
    )
    assert probs[0] == 0.0
    assert probs[1] == pytest.approx(1.0 / 3.0)
    assert probs[2] == pytest.approx(1.0 / 6.0)
    assert sum(probs) == pytest.approx(1.0, abs=1e-12)

    assert lrc.limit_constant(0.0, 2, 2.0) == pytest.approx(1.0, abs=1e-4)
    assert lrc.rate_sum(1000, 0.0, 2) == pytest.approx(999.0)


def test_engine_runs_are_deterministic_and_consistent():
    params = lrc.ModelParams(d=1, m=50, lambda_plus=lrc.ParamFamily.constant(2.0))
    res1, log1 = lrc.coupled_run(params, seed=42, phase_time=1.0)
    res2, log2 = lrc.coupled_run(params, seed=42, phase_time=1.0)
    assert res1.n_minus == res2.n_minus
    assert res1.t_cov == res2.t_cov
    assert log1.roots_minus == log2.roots_minus
    assert res1.n_minus + res1.n_plus == 50
    assert res1.m_n == min(res1.n_minus, res1.n_plus)
    assert res1.proposals == res1.rejections + 48
    assert res1.defect_minus_at_phase >= 0

    oracle = lrc.gillespie_run(params, seed=42, checkpoints=[0.5])
    assert oracle.n_minus + oracle.n_plus == 50
    assert len(oracle.checkpoints) == 1


def test_urn_and_yule():
    nm, np_ = lrc.urn_run(25, 2.0, seed=7)
    assert nm + np_ == 25 and nm >= 1 and np_ >= 1

    rng = lrc.Rng(3)
    draws = [lrc.yule_size(1.0, math.log(2.0), rng) for _ in range(20000)]
    assert sum(draws) / len(draws) == pytest.approx(2.0, rel=0.05)
    assert lrc.geometric_pmf(0.5, 1) == pytest.approx(0.5)

    assert lrc.derive_stream(1, 2) == lrc.derive_stream(1, 2)
    assert lrc.derive_stream(1, 2) != lrc.derive_stream(1, 3)


def test_classify_regime():
    eq = lrc.ParamFamily.constant(0.5)
    regime, series, approx = lrc.classify_regime(
        eq, eq, lrc.ParamFamily.constant(2.0), 1, 2.0, [100, 10000, 1000000]
    )
    assert regime == "case-iii"
    assert not approx
    assert all(z == pytest.approx(2.0) for _, z, _ in series)


def test_scenario_report_dict():
    report = lrc.run_scenario("urn-crossval", runs=200, seed=11)
    assert report["spec"]["scenario"] == "urn-crossval"
    assert report["checks"]
    assert isinstance(report["pass"], bool)
    csv_text = lrc.rows_csv_for_scenario('{"scenario": "urn-crossval", "runs": 200, "seed": 11}')
    assert csv_text.splitlines()[0].startswith("run_index,m,n,z,c_n")
    assert len(csv_text.splitlines()) == 201
