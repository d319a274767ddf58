import logging
import os
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
from typing import Sequence

import pandas

from artaxis.cli.arguments import RunConfig, SweepSpec
from artaxis.cli.commands import initial_fields, runner_arguments
from artaxis.grid.snapshot import write_table
from artaxis.model.criteria import classify_regime
from artaxis.solver.runner import SimulationRunner
from artaxis.util.constants import BEGIN_LINE, END_LINE, EPSILON_SCAN
from artaxis.util.errors import ArtaxisError
from artaxis.util.utils import rank0_print

PHASE_COLUMNS = ('verdict', 'sup_linf', 'sup_lp', 'regime', 'error')
# keys that may differ between otherwise identical sweeps
HEADER_EXCLUDE = ('sweep.workers', 'output.directory')


def _worker_init():
    os.environ['LOCAL_RANK'] = '1'


def run_point(config_data: dict, names: Sequence[str], values: Sequence[float]) -> dict:
    row = dict(zip(names, values))
    try:
        config = RunConfig.model_validate(config_data).with_updates(
            **{f'model.{name}': value for name, value in zip(names, values)})
        params = config.params()
        grid = config.make_grid()
        _, verdict, _ = SimulationRunner(runner_arguments(config)).run(
            params, grid, initial_fields(config, params, grid))
        report = classify_regime(params, config.criteria.c_reg, EPSILON_SCAN, config.criteria.epsilon)
        row.update(verdict=verdict.kind.value, sup_linf=verdict.sup_linf, sup_lp=verdict.sup_lp,
                   regime=report.regime.value, error='')
    except ArtaxisError as e:
        logging.warning(f'[run_point] {dict(zip(names, values))} failed: {e}')
        row.update(verdict='Error', sup_linf=float('nan'), sup_lp=float('nan'), regime='', error=str(e))
    return row


def cmd_sweep(spec: SweepSpec) -> int:
    names = [axis.name for axis in spec.axes]
    points = spec.points()
    config_data = spec.base.model_dump()

    rank0_print(BEGIN_LINE)
    rank0_print(f'[{datetime.now()}] Sweep over {names}: {len(points)} points on {spec.workers} worker(s)')
    rank0_print(END_LINE)
    if spec.workers == 1:
        rows = [run_point(config_data, names, values) for values in points]
    else:
        with ProcessPoolExecutor(max_workers=spec.workers, initializer=_worker_init) as executor:
            rows = list(executor.map(run_point, [config_data] * len(points), [names] * len(points), points))

    rows.sort(key=lambda row: tuple(row[name] for name in names))
    frame = pandas.DataFrame(rows, columns=names + list(PHASE_COLUMNS))
    directory = spec.base.output.directory
    os.makedirs(directory, exist_ok=True)
    header = spec.base.resolved_items(exclude=HEADER_EXCLUDE)
    write_table(os.path.join(directory, 'phase.csv'), frame, header)

    failed = sum(1 for row in rows if row['error'])
    rank0_print(f'[{datetime.now()}] Sweep done: {len(rows)} rows, {failed} failed -> {directory}')
    return 0 if len(rows) == len(points) else 1