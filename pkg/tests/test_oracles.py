import math

import numpy as np
import pytest

from artaxis.grid.field import Grid, ScalarField
from artaxis.oracles.inequalities import check_power_sum_inequality, check_young_splitting, \
    check_lower_order_absorption, young_absorption_constant, power_sum_sweep, young_splitting_sweep
from artaxis.oracles.mms import mms_convergence, MMS_MIN_ORDER
from artaxis.oracles.regularity import estimate_c_rho, uniform_sample_sides, sample_sides, sample_ratio
from artaxis.util.errors import DomainError


def test_power_sum_cases():
    assert check_power_sum_inequality(1.0, 1.0, 2.0)
    assert check_power_sum_inequality(3.0, 0.0, 5.0)
    assert check_power_sum_inequality(0.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        check_power_sum_inequality(-1.0, 1.0, 2.0)
    with pytest.raises(DomainError):
        check_power_sum_inequality(1.0, 1.0, 0.5)


def test_power_sum_sweep_has_no_violations():
    assert power_sum_sweep(samples=100000, seed=11) == 0


def test_young_splitting_cases():
    assert check_young_splitting(0.0, 2.0, -3.0, 2.0, 1.0, 1.0, 1.0, 1.0)
    assert check_young_splitting(5.0, 0.0, 0.0, 3.0, 0.5, 2.0, 0.3, 1e-3)
    assert check_young_splitting(1.3, 0.7, 0.2, 1.5, 2.5, 0.4, 1.7, 8.0)
    with pytest.raises(DomainError):
        check_young_splitting(-1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        check_young_splitting(1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 0.0)


def test_young_splitting_sweep_has_no_violations():
    assert young_splitting_sweep(samples=100000, seed=12) == 0


def test_absorption_constants_are_attained():
    c1, c2 = check_lower_order_absorption(1.0, 2.0, 0.5, 1.0, 1.0)
    s_star = (2.5 / (0.5 * 3.0)) ** (1.0 / 0.5)
    assert s_star ** 2.5 - 0.5 * s_star ** 3 == pytest.approx(c2, rel=1e-12)
    assert c2 == pytest.approx(young_absorption_constant(1.0, 2.5, 3.0, 1.0))
    s_star = 2.0 / 1.5
    assert s_star ** 2 - 0.5 * s_star ** 3 == pytest.approx(c1, rel=1e-12)


def test_absorption_becomes_free_for_large_eps():
    c1, c2 = check_lower_order_absorption(1.0, 2.0, 0.5, 1.0, 1e12)
    assert 0 < c1 < 1e-12 and 0 < c2 < 1e-12


def test_absorption_needs_k_below_l():
    with pytest.raises(DomainError):
        check_lower_order_absorption(1.0, 2.0, 1.0, 1.0, 1.0)


GRID = Grid.unit(2, 8)


@pytest.mark.parametrize('rho, q, c, horizon', [(1.0, 2.0, 1.0, 1.0), (0.5, 3.0, -2.0, 2.0), (2.0, 1.5, 0.3, 0.5)])
def test_uniform_sample_matches_closed_form(rho, q, c, horizon):
    grid = Grid(dim=2, extent=(1.0, 2.0), cells=(8, 6))
    lhs, rhs = sample_sides(rho, q, ScalarField.zeros(grid), ScalarField.constant(grid, c), horizon)
    lhs_exact, rhs_exact = uniform_sample_sides(rho, q, c, horizon, grid.measure)
    assert lhs == pytest.approx(lhs_exact, rel=1e-6)
    assert rhs == pytest.approx(rhs_exact, rel=1e-6)


def test_zero_data_contributes_nothing():
    zeros = ScalarField.zeros(GRID)
    assert sample_ratio(1.0, 2.0, zeros, zeros, 1.0) == 0.0


def test_estimate_is_reproducible_and_a_running_supremum():
    first = estimate_c_rho(1.0, 2.0, GRID, 0.5, 3, seed=5)
    again = estimate_c_rho(1.0, 2.0, GRID, 0.5, 3, seed=5)
    more = estimate_c_rho(1.0, 2.0, GRID, 0.5, 6, seed=5)
    assert first.c_lower == again.c_lower
    assert first.worst_source_id == again.worst_source_id
    assert more.c_lower >= first.c_lower
    assert more.ratios[:3] == first.ratios
    assert all(r <= more.c_lower for r in more.ratios + [more.uniform_ratio])
    assert more.c_lower in more.ratios + [more.uniform_ratio]


def test_uniform_ratio_stays_bounded_in_horizon():
    ratios = []
    for horizon in (0.5, 1.0, 2.0, 4.0, 8.0):
        lhs, rhs = uniform_sample_sides(1.0, 2.0, 1.0, horizon, 1.0)
        ratios.append((lhs / (2.0 * rhs)) ** 0.5)
    assert all(math.isfinite(r) and 0 < r < 2.0 for r in ratios)


def test_estimate_domain_guards():
    with pytest.raises(DomainError):
        estimate_c_rho(0.5, 1.5, GRID, 1.0, 4)
    with pytest.raises(DomainError):
        estimate_c_rho(1.0, 2.0, GRID, 1.0, 0)


def test_estimate_report_rows():
    estimate = estimate_c_rho(1.0, 2.0, Grid.unit(1, 16), 0.5, 2, seed=1)
    row = estimate.to_row()
    assert row['samples'] == 2 and row['seed'] == 1
    assert 'c_lower = ' in estimate.to_text()


def test_mms_cosine_1d_is_second_order():
    report = mms_convergence('cosine-1d')
    assert report.passed
    assert all(order >= MMS_MIN_ORDER for order in report.observed_orders.values())


def test_mms_cosine_2d_is_second_order():
    report = mms_convergence('cosine-2d')
    assert report.passed
    errors = report.errors['u']
    assert errors[1] / errors[2] == pytest.approx(4.0, rel=0.2)


def test_mms_constant_solution_is_exact():
    report = mms_convergence('constant-2d')
    assert report.exact_case and report.passed
    assert max(max(e) for e in report.errors.values()) <= 1e-12
