import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from interferox import duality as du
from interferox.errors import (GridMismatch, InvalidIntensities, OutOfRange,
                               WrongArity)


def test_visibility_perfect_and_flat():
    assert du.visibility(1.0, 0.0) == 1.0
    assert du.visibility(1.0, 1.0) == 0.0


def test_visibility_validation():
    with pytest.raises(InvalidIntensities):
        du.visibility(0.5, 0.7)
    with pytest.raises(InvalidIntensities):
        du.visibility(1.0, -0.1)
    with pytest.raises(InvalidIntensities):
        du.visibility(0.0, 0.0)


def test_predictability_examples():
    assert du.predictability(du.PathDistribution((0.5, 0.5))) == 0.0
    assert du.predictability(du.PathDistribution((1.0, 0.0))) == 1.0
    assert du.predictability(du.PathDistribution((0.33, 0.67))) == \
        pytest.approx(0.34)


def test_predictability_arity():
    with pytest.raises(WrongArity):
        du.predictability(du.PathDistribution((0.5, 0.25, 0.25)))


def test_path_distribution_validation():
    with pytest.raises(ValueError):
        du.PathDistribution((0.5, 0.6))
    with pytest.raises(ValueError):
        du.PathDistribution((-0.1, 1.1))


def test_wz_information_values():
    assert du.wz_information(du.PathDistribution((0.5, 0.5))) == \
        pytest.approx(math.log(2), abs=1e-15)
    assert du.wz_information(du.PathDistribution((1.0, 0.0))) == 0.0
    # unequal-slit allocation: -0.33 ln 0.33 - 0.67 ln 0.67
    assert du.wz_information(du.PathDistribution((0.33, 0.67))) == \
        pytest.approx(0.6342, abs=1e-4)


def test_wz_information_bits():
    h = du.wz_information(du.PathDistribution((0.5, 0.5)), units="bits")
    assert h == pytest.approx(1.0, abs=1e-15)


@given(st.floats(0.0, 0.5), st.floats(0.0, 0.5))
def test_wz_information_schur_concave_two_entries(p, q):
    # closer to uniform majorizes less and carries more missing information
    hp = du.wz_information(du.PathDistribution((p, 1 - p)))
    hq = du.wz_information(du.PathDistribution((q, 1 - q)))
    if p < q:
        assert hp <= hq + 1e-12


def test_wz_information_maximal_at_uniform():
    h_uni = du.wz_information(du.PathDistribution((0.25,) * 4))
    assert h_uni == pytest.approx(math.log(4), abs=1e-12)
    for ps in ((0.4, 0.3, 0.2, 0.1), (0.7, 0.1, 0.1, 0.1)):
        assert du.wz_information(du.PathDistribution(ps)) < h_uni


def test_trace_distance_extremes():
    dx = 0.1
    rho = np.zeros(40)
    rho[:10] = 1 / (10 * dx)
    assert du.distinguishability_trace(rho, rho, dx) == 0.0
    rho2 = np.zeros(40)
    rho2[20:30] = 1 / (10 * dx)
    assert du.distinguishability_trace(rho, rho2, dx) == pytest.approx(1.0)


def test_trace_distance_grid_mismatch():
    with pytest.raises(GridMismatch):
        du.distinguishability_trace(np.ones(8), np.ones(16), 0.1)


@given(st.integers(0, 2 ** 31 - 1))
def test_trace_distance_symmetric_and_triangle(seed):
    rng = np.random.default_rng(seed)
    dx = 0.25
    profs = rng.random((3, 32))
    profs /= profs.sum(axis=1, keepdims=True) * dx
    d01 = du.distinguishability_trace(profs[0], profs[1], dx)
    d10 = du.distinguishability_trace(profs[1], profs[0], dx)
    d02 = du.distinguishability_trace(profs[0], profs[2], dx)
    d12 = du.distinguishability_trace(profs[1], profs[2], dx)
    assert d01 == d10
    assert d01 <= d02 + d12 + 1e-12
    assert 0.0 <= d01 <= 1.0 + 1e-12


def test_duality_check_saturated():
    res = du.duality_check(0.0, 1.0)
    assert res.total == 1.0 and res.satisfied


def test_duality_check_pure_state_point():
    # amplitudes sqrt(1/3), sqrt(2/3): P = 1/3, V = 2*sqrt(2)/3
    res = du.duality_check(1 / 3, 2 * math.sqrt(2) / 3)
    assert res.total == pytest.approx(1.0, abs=1e-12)


def test_duality_check_flags_violation():
    res = du.duality_check(1.0, 1.0)
    assert res.total == pytest.approx(2.0)
    assert not res.satisfied
    assert res.slack == pytest.approx(-1.0)


def test_duality_check_rejects_out_of_range():
    with pytest.raises(OutOfRange):
        du.duality_check(1.2, 0.1)
    with pytest.raises(OutOfRange):
        du.duality_check(0.1, -0.2)


def test_pure_state_identity_on_probability_grid():
    for p in np.arange(0.05, 0.951, 0.05):
        pred = abs(2 * p - 1)
        vis = 2 * math.sqrt(p * (1 - p))
        assert pred ** 2 + vis ** 2 == pytest.approx(1.0, abs=1e-12)


def test_report_carries_both_sums():
    report = du.DualityReport.build(
        v=0.999, path=du.PathDistribution((0.5, 0.5)), d_trace=0.999)
    assert report.p == 0.0
    assert report.duality_sum_pred <= 1.0 + 1e-9
    assert report.duality_sum_trace == pytest.approx(2 * 0.999 ** 2)
    assert report.trace_violation and not report.pred_violation
    payload = report.to_json()
    for key in ("v", "p", "d_trace", "h_nats", "duality_sum_pred",
                "duality_sum_trace", "slack_pred", "slack_trace",
                "pred_violation", "trace_violation"):
        assert key in payload
