import math

import numpy as np
import pytest

from artaxis.grid.field import Grid, ScalarField
from artaxis.model.criteria import compute_p_bar, compute_xi_const
from artaxis.oracles.regularity import estimate_c_rho
from artaxis.oracles.trajectory import TrajectorySample, EstimateCheck, record_trajectory, power_sum_step_holds, \
    taxis_young_constant, check_w_regularity_estimate, check_v_regularity_estimate, check_lp_growth_inequality, \
    check_trajectory_estimates, LP_GROWTH
from artaxis.solver.runner import RunnerArguments
from artaxis.util.errors import DomainError

GRID = Grid.unit(2, 8)


def _equilibrium_samples(params, c, times):
    u, v, w = (ScalarField.constant(GRID, value) for value in params.homogeneous_state(c))
    return [TrajectorySample(float(t), u, v, w) for t in times]


def _smooth_run(params, horizon=0.2):
    u0 = ScalarField.from_function(GRID, lambda x, y: 1.0 + 0.3 * np.cos(np.pi * x) * np.cos(np.pi * y))
    _, v0, w0 = params.homogeneous_state(1.0)
    init = (u0, ScalarField.constant(GRID, v0), ScalarField.constant(GRID, w0))
    return record_trajectory(params, GRID, init, RunnerArguments(horizon=horizon, sample_stride=1))


def test_equilibrium_matches_closed_form(make_params):
    params = make_params(k=0.4, l=0.4, gamma0=0.5, gamma1=1.5)
    c, p = 1.3, 2.0
    samples = _equilibrium_samples(params, c, np.linspace(0.0, 1.0, 401))
    _, v, w = params.homogeneous_state(c)
    q = (p + params.l) / params.l
    c_reg = 0.5

    check = check_w_regularity_estimate(samples, params, p, c_reg)
    assert check.q == pytest.approx(6.0)
    assert check.lhs[-1] == pytest.approx((w / q) ** q * math.expm1(1.0), rel=1e-5)
    source = params.gamma1 ** q * 2.0 ** (p + params.l - 1.0) * (c ** (p + params.l) + 1.0) * math.expm1(1.0)
    assert check.rhs[-1] == pytest.approx(2.0 ** (p / params.l) * c_reg ** q * (w ** q + source), rel=1e-5)
    assert check.pointwise_holds and check.holds

    check = check_v_regularity_estimate(samples, params, p, c_reg)
    np.testing.assert_array_equal(check.lhs, 0.0)
    assert check.rhs[0] == pytest.approx(2.0 ** (check.q - 1.0) * c_reg ** check.q * v ** check.q, rel=1e-12)
    assert check.holds

    check = check_lp_growth_inequality(samples, params, p, xi_const=1.0)
    bracket = p / (p + params.l) * q ** (-params.l / p) * (1.0 + params.delta + 1.0 / q) - params.gamma0
    bound = (c ** (p + params.k) + (p - 1.0) * ((w / q) ** q + (params.delta + 1.0 / q) * w ** q)
             + (p - 1.0) * bracket * c ** (p + params.l))
    np.testing.assert_allclose(check.lhs, 0.0, atol=1e-12)
    np.testing.assert_allclose(check.rhs, bound, rtol=1e-12)
    assert check.name == LP_GROWTH and check.holds


def test_estimates_hold_along_smooth_run(make_params):
    params = make_params(k=0.4, l=0.4)
    samples, verdict = _smooth_run(params)
    assert samples[0].t == 0.0 and samples[-1].t == pytest.approx(0.2)
    p = compute_p_bar(2, params.k, params.l, params.beta, params.delta)
    c_w = estimate_c_rho(params.delta, (p + params.l) / params.l, GRID, 1.0, 2).c_lower
    c_v = estimate_c_rho(params.beta, (p + params.k) / params.k, GRID, 1.0, 2).c_lower
    xi_const = compute_xi_const(p, params.l, c_w, params.gamma1)
    checks = check_trajectory_estimates(samples, params, p, c_w, c_v, xi_const)
    for check in checks:
        assert check.pointwise_holds, check.name
        assert check.holds, check.to_text()
        assert check.to_row()['worst_excess'] < 0


def test_growth_inequality_holds_for_any_weight(make_params):
    params = make_params(k=0.3, l=0.6, gamma0=0.2, gamma1=1.0)
    samples, _ = _smooth_run(params, horizon=0.1)
    for xi_const in (1e-6, 1e-2, 1.0, 1e3):
        assert check_lp_growth_inequality(samples, params, 2.5, xi_const).holds


def test_small_regularity_constant_is_detected(make_params):
    params = make_params(k=0.4, l=0.4)
    samples, _ = _smooth_run(params, horizon=0.1)
    check = check_w_regularity_estimate(samples, params, 2.0, 1e-3)
    assert check.pointwise_holds
    assert not check.holds
    assert check.to_row()['worst_excess'] > 0


def test_power_sum_step_on_samples():
    rng = np.random.default_rng(5)
    u = np.concatenate([[0.0, 1.0], rng.uniform(0.0, 1e3, 10_000)])
    for exponent in (1.0, 1.3, 2.4, 7.5):
        assert power_sum_step_holds(u, exponent)


@pytest.mark.parametrize('p, k, chi', [(2.0, 0.4, 1.0), (6.7, 0.3, 2.5), (1.5, 1.2, 0.1)])
def test_taxis_young_constant_is_sharp(p, k, chi):
    c = taxis_young_constant(p, k, chi)
    r, s = (p + k) / p, (p + k) / k
    slope = (p - 1.0) * chi
    # sup over a of slope·a − a^r at b = 1
    a_star = (slope / r) ** (1.0 / (r - 1.0))
    assert slope * a_star - a_star ** r == pytest.approx(c, rel=1e-12)
    rng = np.random.default_rng(3)
    a, b = rng.uniform(0.0, 10.0, (2, 10_000))
    assert np.all(slope * a * b <= a ** r + c * b ** s + 1e-12 * (a ** r + c * b ** s))


def test_estimate_check_reports_worst_sample():
    check = EstimateCheck('demo', np.array([0.0, 0.5, 1.0]), np.array([0.0, 2.0, 1.0]), np.array([0.0, 1.0, 4.0]))
    assert not check.holds
    row = check.to_row()
    assert row['worst_t'] == 0.5
    assert row['worst_excess'] == pytest.approx(0.5)
    assert 'demo.holds = False' in check.to_text()


def test_trajectory_checks_need_two_samples(make_params):
    params = make_params()
    samples = _equilibrium_samples(params, 1.0, [0.0])
    with pytest.raises(DomainError):
        check_w_regularity_estimate(samples, params, 2.0, 1.0)
    with pytest.raises(DomainError):
        check_lp_growth_inequality(_equilibrium_samples(params, 1.0, [0.0, 1.0]), params, 2.0, math.inf)
