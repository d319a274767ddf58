import logging
import os
from dataclasses import dataclass
from datetime import datetime

import numpy as np

from artaxis.grid.snapshot import write_field_pgm, write_field_csv
from artaxis.solver.state import SimState, NormSeries, Verdict
from artaxis.util.constants import BEGIN_LINE, END_LINE, GRONWALL_FACTOR, GRONWALL_FIT_FRACTION, MONOTONE_WINDOW
from artaxis.util.utils import rank0_print


class SimulationCallback:
    def on_run_begin(self, state: SimState, series: NormSeries):
        pass

    def on_step_end(self, state: SimState, step_index: int):
        pass

    def on_sample(self, state: SimState, series: NormSeries):
        pass

    def on_run_end(self, state: SimState, series: NormSeries, verdict: Verdict):
        pass


class NormMonitorCallback(SimulationCallback):
    def __init__(self, monitor_every: int = 100):
        self.monitor_every = monitor_every

    def _monitoring(self, series: NormSeries):
        t, mass, lp, linf_u, linf_v, linf_w, dt = series.rows[-1]
        rank0_print(BEGIN_LINE)
        rank0_print(f'[{datetime.now()}] sample {len(series)} @ t={t:.6f} with dt={dt:.3e}')
        rank0_print(f'mass={mass:.12e} int u^{series.p:g}={lp:.6e}')
        rank0_print(f'linf u={linf_u:.6e} v={linf_v:.6e} w={linf_w:.6e}')
        rank0_print(END_LINE)

    def on_sample(self, state, series):
        if len(series) % self.monitor_every == 0 or len(series) == 10:  # sample 10 for a fast check
            self._monitoring(series)

    def on_run_end(self, state, series, verdict):
        self._monitoring(series)
        rank0_print(verdict.summary())


class SnapshotCallback(SimulationCallback):
    """Writes u, v, w as PGM + CSV every `snapshot_every` steps (0: final state only)."""

    def __init__(self, directory, snapshot_every: int = 0, header=()):
        self.directory = directory
        self.snapshot_every = snapshot_every
        self.header = header

    def _write(self, state: SimState, tag: str):
        os.makedirs(self.directory, exist_ok=True)
        header = list(self.header) + [('t', repr(state.t))]
        for name in ('u', 'v', 'w'):
            f = getattr(state, name)
            stem = os.path.join(self.directory, f'{name}_{tag}')
            write_field_pgm(stem + '.pgm', f, header)
            write_field_csv(stem + '.csv', f, header)

    def on_step_end(self, state, step_index):
        if self.snapshot_every > 0 and step_index % self.snapshot_every == 0:
            self._write(state, f'{step_index:08d}')

    def on_run_end(self, state, series, verdict):
        self._write(state, 'final')


@dataclass
class GronwallReport:
    offset: float
    slope: float
    max_ratio: float
    factor: float

    @property
    def passed(self) -> bool:
        return self.max_ratio <= self.factor


def gronwall_check(series: NormSeries, factor: float = GRONWALL_FACTOR,
                   fit_fraction: float = GRONWALL_FIT_FRACTION) -> GronwallReport:
    """Compare e^t ∫u^p with the affine envelope a + c(e^t − 1) fitted on the early samples.

    The ratio is evaluated as ∫u^p / (a e^{-t} + c (1 − e^{-t})) to stay finite on long runs.
    """
    t = series.column('t')
    lp = series.column('lp')
    assert len(t) >= 2, f'expect at least 2 samples, but got {len(t)}'
    n_fit = max(2, int(np.ceil(fit_fraction * len(t))))
    growth = np.expm1(t[:n_fit])
    slope, offset = np.polyfit(growth, np.exp(t[:n_fit]) * lp[:n_fit], 1)
    # the envelope is at least the initial value and never shrinks
    offset = max(offset, lp[0])
    slope = max(slope, 0.0)
    decay = np.exp(-t)
    envelope = offset * decay + slope * (1.0 - decay)
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = np.where(envelope > 0, lp / envelope, np.where(lp > 0, np.inf, 0.0))
    return GronwallReport(offset=float(offset), slope=float(slope), max_ratio=float(ratio.max()), factor=factor)


def blowup_monotone(series: NormSeries, window: int = MONOTONE_WINDOW) -> bool:
    linf = series.column('linf_u')[-window:]
    return bool(np.all(np.diff(linf) >= 0))


class GronwallCallback(SimulationCallback):
    def __init__(self, factor: float = GRONWALL_FACTOR, fit_fraction: float = GRONWALL_FIT_FRACTION):
        self.factor = factor
        self.fit_fraction = fit_fraction
        self.report = None

    def on_run_end(self, state, series, verdict):
        if len(series) < 2:
            return
        self.report = gronwall_check(series, self.factor, self.fit_fraction)
        if not self.report.passed:
            logging.warning(f'[GronwallCallback] e^t int u^p left its fitted envelope: '
                            f'max ratio {self.report.max_ratio:.3e} > {self.factor:g}')