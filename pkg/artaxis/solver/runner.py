import logging
from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from artaxis.grid.field import Grid, ScalarField, linf_norm
from artaxis.model.configuration_artaxis import ModelParams
from artaxis.model.criteria import compute_p_bar
from artaxis.solver.callback import SimulationCallback, blowup_monotone
from artaxis.solver.state import SimState, NormSeries, Verdict, VerdictKind
from artaxis.solver.stepper import step, adapt_dt, SourceTerms
from artaxis.util.constants import BEGIN_LINE, END_LINE, DEFAULT_CFL_SAFETY, DEFAULT_DT_MIN, DEFAULT_DT_MAX, \
    DEFAULT_SAMPLE_STRIDE, BLOWUP_FACTOR, COLLAPSE_REJECTIONS, PLATEAU_TOLERANCE
from artaxis.util.errors import DomainError, GridMismatchError, StepRejectedError
from artaxis.util.utils import rank0_print

InitialFields = Union[SimState, Tuple[ScalarField, ScalarField, ScalarField]]


@dataclass
class RunnerArguments:
    horizon: float = field(default=1.0)
    monitor_p: Optional[float] = field(default=None)  # None: p̄ of the parameters
    blowup_threshold: Optional[float] = field(default=None)  # None: 1e6 (‖u₀‖∞ + 1)
    cfl_safety: float = field(default=DEFAULT_CFL_SAFETY)
    dt_min: float = field(default=DEFAULT_DT_MIN)
    dt_max: float = field(default=DEFAULT_DT_MAX)
    sample_stride: int = field(default=DEFAULT_SAMPLE_STRIDE)
    face_average: str = field(default='mean')

    def __post_init__(self):
        assert self.horizon > 0, f'expect horizon > 0, but got {self.horizon}'
        assert 0 < self.dt_min <= self.dt_max, f'expect 0 < dt_min <= dt_max, but got {self.dt_min}, {self.dt_max}'
        assert self.sample_stride >= 1, f'expect sample_stride >= 1, but got {self.sample_stride}'


def plateau_reached(series: NormSeries, horizon: float, tolerance: float = PLATEAU_TOLERANCE) -> bool:
    """sup of ∫u^p over the last half stays within `tolerance` of its value at 3/4 of the run."""
    t = series.column('t')
    lp = series.column('lp')
    late = lp[t >= 0.5 * horizon]
    if len(late) == 0:
        return False
    reference = float(np.interp(0.75 * horizon, t, lp))
    return abs(float(late.max()) - reference) <= tolerance * reference


class SimulationRunner:
    def __init__(self, args: RunnerArguments):
        self.args = args

    def _initial_state(self, params: ModelParams, init: InitialFields) -> SimState:
        if isinstance(init, SimState):
            u, v, w = init.u, init.v, init.w
        else:
            u, v, w = init
        state = SimState(u, v, w, t=0.0)
        if not state.is_nonnegative():
            raise DomainError('initial data must be nonnegative')
        dt = adapt_dt(state, params, self.args.cfl_safety, self.args.dt_min, self.args.dt_max)
        return replace(state, dt=dt)

    def run(self, params: ModelParams, grid: Grid, init: InitialFields,
            callbacks: Sequence[SimulationCallback] = (),
            sources: Optional[SourceTerms] = None) -> Tuple[NormSeries, Verdict, SimState]:
        args = self.args
        if params.dim != grid.dim:
            raise GridMismatchError(f'expect parameters for dim={grid.dim}, but got dim={params.dim}')
        state = self._initial_state(params, init)
        assert state.grid == grid, f'initial data lives on {state.grid}, expected {grid}'

        p = args.monitor_p if args.monitor_p is not None else \
            compute_p_bar(params.dim, params.k, params.l, params.beta, params.delta)
        if p <= grid.dim / 2:
            logging.warning(f'[SimulationRunner] monitor p={p} does not exceed n/2={grid.dim / 2}; '
                            f'the boundedness criterion does not apply')
        threshold = args.blowup_threshold if args.blowup_threshold is not None else \
            BLOWUP_FACTOR * (linf_norm(state.u) + 1.0)

        rank0_print(BEGIN_LINE)
        rank0_print(f'[{datetime.now()}] Simulation begin: grid={grid.cells}, horizon={args.horizon}, '
                    f'monitor p={p:g}, blow-up threshold={threshold:.3e}')
        rank0_print(END_LINE)

        series = NormSeries(p)
        series.record(state)
        for callback in callbacks:
            callback.on_run_begin(state, series)

        kind = None
        step_index = 0
        rejections = 0
        dt_cap = None
        if not linf_norm(state.u) < threshold:
            kind = VerdictKind.BLOWUP_SUSPECTED
        while kind is None and state.t < args.horizon:
            dt = adapt_dt(state, params, args.cfl_safety, args.dt_min, args.dt_max)
            if dt_cap is not None:
                dt = max(min(dt, dt_cap), args.dt_min)
            remaining = args.horizon - state.t
            final = dt >= remaining
            if final:
                dt = remaining
            try:
                new_state = step(replace(state, dt=dt), params, args.face_average, sources)
            except StepRejectedError as e:
                if dt <= args.dt_min:
                    rejections += 1
                    if rejections >= COLLAPSE_REJECTIONS:
                        logging.warning(f'[SimulationRunner] step size collapsed at t={state.t:.6f}: {e}')
                        kind = VerdictKind.STEP_COLLAPSE
                dt_cap = max(0.5 * dt, args.dt_min)
                continue
            rejections = 0
            dt_cap = None
            state = replace(new_state, t=args.horizon) if final else new_state
            step_index += 1
            for callback in callbacks:
                callback.on_step_end(state, step_index)

            linf_u = linf_norm(state.u)
            blowup = not linf_u < threshold
            if step_index % args.sample_stride == 0 or final or blowup:
                series.record(state)
                for callback in callbacks:
                    callback.on_sample(state, series)
            if blowup:
                kind = VerdictKind.BLOWUP_SUSPECTED

        if kind is None:
            kind = VerdictKind.BOUNDED_RUN if plateau_reached(series, args.horizon) else VerdictKind.HORIZON_REACHED
        if kind is VerdictKind.BLOWUP_SUSPECTED and len(series) > 1 and not blowup_monotone(series):
            logging.warning('[SimulationRunner] suspected blow-up without monotone growth of linf u '
                            'over the final samples')
        if state.clipped_mass > 0:
            logging.warning(f'[SimulationRunner] clipped {state.clipped_mass:.3e} of negative mass in total')

        verdict = Verdict(
            kind=kind,
            t_end=state.t,
            sup_lp=float(series.column('lp').max()),
            sup_linf=float(series.column('linf_u').max())
        )
        for callback in callbacks:
            callback.on_run_end(state, series, verdict)
        return series, verdict, state


def run_simulation(params: ModelParams, grid: Grid, init: InitialFields, horizon: float,
                   monitor_p: Optional[float] = None, blowup_threshold: Optional[float] = None,
                   callbacks: Sequence[SimulationCallback] = (), sources: Optional[SourceTerms] = None,
                   **kwargs) -> Tuple[NormSeries, Verdict, SimState]:
    args = RunnerArguments(horizon=horizon, monitor_p=monitor_p, blowup_threshold=blowup_threshold, **kwargs)
    return SimulationRunner(args).run(params, grid, init, callbacks=callbacks, sources=sources)
