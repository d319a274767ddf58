import logging
import os
from datetime import datetime

import numpy as np
import pandas

from artaxis.cli.arguments import RunConfig
from artaxis.grid.field import Grid, ScalarField, integral
from artaxis.grid.snapshot import read_field_csv, write_table
from artaxis.model.configuration_artaxis import ModelParams
from artaxis.model.criteria import classify_regime, compute_p_bar, compute_A, compute_xi_const, compute_log_xi_const, \
    gamma0_threshold, scan_epsilon, regime_intervals, falsify_condition, admissible_gamma0_range
from artaxis.oracles.mms import mms_convergence
from artaxis.oracles.regularity import estimate_c_rho
from artaxis.oracles.trajectory import CHECK_COLUMNS, record_trajectory, check_trajectory_estimates
from artaxis.solver.callback import NormMonitorCallback, SnapshotCallback, GronwallCallback
from artaxis.solver.runner import RunnerArguments, SimulationRunner
from artaxis.util.constants import EPSILON_SCAN
from artaxis.util.errors import ConfigValidationError
from artaxis.util.utils import rank0_print, smart_float, comment_header


def initial_fields(config: RunConfig, params: ModelParams, grid: Grid):
    """(u₀, v₀, w₀) for `init.kind`; chemicals start at the equilibrium of the mean density."""
    init = config.init
    if init.kind == 'homogeneous':
        return tuple(ScalarField.constant(grid, value) for value in params.homogeneous_state(init.c))

    if init.kind == 'gaussian':
        center = init.center if init.center is not None else tuple(0.5 * x for x in grid.extent)
        if len(center) != grid.dim:
            raise ConfigValidationError('init.center', f'expect {grid.dim} coordinates, but got {center}')
        coordinates = grid.centers()
        distance = sum((c - x0) ** 2 for c, x0 in zip(coordinates, center))
        bump = ScalarField(grid, np.exp(-distance / (2.0 * init.width ** 2)))
        amplitude = init.amplitude
        if init.mass is not None:
            excess = init.mass - init.background * grid.measure
            if excess <= 0:
                raise ConfigValidationError('init.mass', f'mass {init.mass} does not exceed the background mass')
            amplitude = excess / integral(bump)
        u = bump.with_values(init.background + amplitude * bump.values)
    else:
        u = read_field_csv(init.path, grid)

    _, v_value, w_value = params.homogeneous_state(integral(u) / grid.measure)
    return u, ScalarField.constant(grid, v_value), ScalarField.constant(grid, w_value)


def runner_arguments(config: RunConfig) -> RunnerArguments:
    monitor = config.monitor
    return RunnerArguments(
        horizon=config.time.horizon,
        monitor_p=None if monitor.p == 'pbar' else float(monitor.p),
        blowup_threshold=None if monitor.blowup_threshold == 'auto' else float(monitor.blowup_threshold),
        cfl_safety=config.time.cfl_safety,
        dt_min=config.time.dt_min,
        dt_max=config.time.dt_max,
        sample_stride=monitor.sample_stride,
        face_average=config.grid.face_average
    )


def _write_text(path, text: str, header=()):
    with open(path, 'w', encoding='utf-8', newline='\n') as fp:
        fp.write(comment_header(header))
        fp.write(text + '\n')


def _regime_report(config: RunConfig, params: ModelParams):
    return classify_regime(params, config.criteria.c_reg, EPSILON_SCAN, config.criteria.epsilon)


def cmd_run(config: RunConfig) -> int:
    params = config.params()
    grid = config.make_grid()
    directory = config.output.directory
    os.makedirs(directory, exist_ok=True)
    header = config.resolved_items()

    gronwall = GronwallCallback(factor=config.monitor.gronwall_factor)
    callbacks = [
        NormMonitorCallback(),
        SnapshotCallback(os.path.join(directory, 'snapshots'), config.output.snapshot_every, header),
        gronwall
    ]
    runner = SimulationRunner(runner_arguments(config))
    series, verdict, state = runner.run(params, grid, initial_fields(config, params, grid), callbacks=callbacks)

    write_table(os.path.join(directory, 'norms.csv'), series.to_frame(), header + [('monitor.p_used', repr(series.p))])
    lines = [
        f'verdict = {verdict.kind.value}',
        f't_end = {smart_float(verdict.t_end)}',
        f'sup_lp = {smart_float(verdict.sup_lp)}',
        f'sup_linf = {smart_float(verdict.sup_linf)}',
        f'monitor_p = {smart_float(series.p)}',
        f'mass_drift = {smart_float(series.mass_drift())}',
        f'clipped_mass = {smart_float(state.clipped_mass)}'
    ]
    if gronwall.report is not None:
        lines.append(f'gronwall_max_ratio = {smart_float(gronwall.report.max_ratio)}')
        lines.append(f'gronwall_passed = {gronwall.report.passed}')
    _write_text(os.path.join(directory, 'verdict.txt'), '\n'.join(lines), header)

    report = _regime_report(config, params)
    _write_text(os.path.join(directory, 'regime.txt'), report.to_text(), header)
    write_table(os.path.join(directory, 'regime.csv'), pandas.DataFrame([report.to_row()]), header)
    rank0_print(f'[{datetime.now()}] {verdict.summary()} -> {directory}')
    return verdict.exit_code


def cmd_classify(config: RunConfig) -> int:
    print(_regime_report(config, config.params()).to_text())
    return 0


def cmd_constants(config: RunConfig) -> int:
    p = config.params()
    c_reg = config.criteria.c_reg
    p_bar = compute_p_bar(p.dim, p.k, p.l, p.beta, p.delta)
    A_const = compute_A(p_bar, p.l, p.delta)
    log_xi = compute_log_xi_const(p_bar, p.l, c_reg, p.gamma1)
    xi_const = compute_xi_const(p_bar, p.l, c_reg, p.gamma1)
    threshold = gamma0_threshold(A_const, c_reg, p.gamma1)
    epsilon, bracket = scan_epsilon(p_bar, p.l, p.delta, xi_const, c_reg, p.gamma1, p.gamma0,
                                    EPSILON_SCAN, config.criteria.epsilon, log_xi=log_xi)
    edges = regime_intervals(p.dim)

    print(f'p_bar = {smart_float(p_bar)}')
    print(f'A = {smart_float(A_const)}')
    print(f'Xi = {smart_float(xi_const)}')
    print(f'log_Xi = {smart_float(log_xi)}')
    print(f'gamma0_threshold = {smart_float(threshold)}')
    print(f'bracket = {smart_float(bracket)}')
    print(f'epsilon = {smart_float(epsilon)}')
    for name, value in edges.items():
        print(f'interval_{name} = {smart_float(value)}')
    admissible = admissible_gamma0_range(A_const, c_reg, p.gamma1)
    if admissible is None:
        print('no admissible (gamma0, gamma1)')
    else:
        print(f'admissible gamma0 in ({smart_float(admissible[0])}, {smart_float(admissible[1])}]')
    return 0


def cmd_estimate_creg(config: RunConfig) -> int:
    p = config.params()
    estimate = config.estimate
    p_bar = compute_p_bar(p.dim, p.k, p.l, p.beta, p.delta)
    rho = estimate.rho if estimate.rho is not None else p.delta
    q = estimate.q if estimate.q is not None else (p_bar + p.l) / p.l
    result = estimate_c_rho(rho, q, config.make_grid(), estimate.horizon, estimate.samples,
                            seed=config.seed, modes=estimate.modes)
    status = falsify_condition(compute_A(p_bar, p.l, p.delta), result.c_lower)

    directory = config.output.directory
    os.makedirs(directory, exist_ok=True)
    header = config.resolved_items()
    _write_text(os.path.join(directory, 'creg.txt'), f'{result.to_text()}\nstatus = {status}', header)
    write_table(os.path.join(directory, 'creg.csv'), pandas.DataFrame([result.to_row()]), header)
    print(result.to_text())
    print(status)
    return 0


def cmd_mms(case: str) -> int:
    report = mms_convergence(case)
    return 0 if report.passed else 2


def cmd_check_estimates(config: RunConfig) -> int:
    """Evaluates the a priori estimates along a run; 𝒞_δ and 𝒞_β are empirical lower bounds."""
    params = config.params()
    grid = config.make_grid()
    estimate = config.estimate
    arguments = runner_arguments(config)
    p = arguments.monitor_p if arguments.monitor_p is not None else \
        compute_p_bar(params.dim, params.k, params.l, params.beta, params.delta)

    samples, verdict = record_trajectory(params, grid, initial_fields(config, params, grid), arguments)
    c_w = estimate_c_rho(params.delta, (p + params.l) / params.l, grid, estimate.horizon, estimate.samples,
                         seed=config.seed, modes=estimate.modes).c_lower
    c_v = estimate_c_rho(params.beta, (p + params.k) / params.k, grid, estimate.horizon, estimate.samples,
                         seed=config.seed, modes=estimate.modes).c_lower
    xi_const = compute_xi_const(p, params.l, c_w, params.gamma1)
    if not 0.0 < xi_const < np.inf:
        logging.warning(f'[cmd_check_estimates] Xi={xi_const} outside float range, checking with Xi=1')
        xi_const = 1.0
    checks = check_trajectory_estimates(samples, params, p, c_w, c_v, xi_const, config.grid.face_average)

    directory = config.output.directory
    os.makedirs(directory, exist_ok=True)
    header = config.resolved_items() + [('monitor.p_used', repr(p)), ('Xi_used', repr(xi_const)),
                                        ('verdict', verdict.kind.value)]
    frame = pandas.DataFrame([check.to_row() for check in checks], columns=list(CHECK_COLUMNS))
    write_table(os.path.join(directory, 'estimates.csv'), frame, header)
    text = '\n'.join(check.to_text() for check in checks)
    _write_text(os.path.join(directory, 'estimates.txt'), text, header)
    print(text)
    return 0 if all(check.holds for check in checks) else 2
