from dataclasses import dataclass, field
from enum import Enum
from typing import List

import numpy as np
import pandas

from artaxis.grid.field import ScalarField, same_grid, integral, lp_integral, linf_norm
from artaxis.util.constants import NEGATIVE_TOLERANCE

SERIES_COLUMNS = ('t', 'mass', 'lp', 'linf_u', 'linf_v', 'linf_w', 'dt')


@dataclass(frozen=True)
class SimState:
    u: ScalarField
    v: ScalarField
    w: ScalarField
    t: float = field(default=0.0)
    dt: float = field(default=1e-3)
    clipped_mass: float = field(default=0.0)

    def __post_init__(self):
        same_grid(self.u, self.v, self.w)
        assert self.t >= 0, f'expect t >= 0, but got {self.t}'
        assert self.dt > 0, f'expect dt > 0, but got {self.dt}'

    @property
    def grid(self):
        return self.u.grid

    def is_nonnegative(self, tolerance=NEGATIVE_TOLERANCE) -> bool:
        return all(f.min() >= -tolerance for f in (self.u, self.v, self.w))


class NormSeries:
    """Time series of the monitored norms; rows are appended in time order."""

    def __init__(self, p: float):
        self.p = p
        self.rows: List[tuple] = []

    def record(self, state: SimState, dt: float = None):
        if self.rows:
            assert state.t > self.rows[-1][0], \
                f'expect strictly increasing t, but got {state.t} after {self.rows[-1][0]}'
        self.rows.append((
            state.t,
            integral(state.u),
            lp_integral(state.u, self.p),
            linf_norm(state.u),
            linf_norm(state.v),
            linf_norm(state.w),
            state.dt if dt is None else dt
        ))

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        index = SERIES_COLUMNS.index(name)
        return np.array([row[index] for row in self.rows], dtype=float)

    def to_frame(self) -> pandas.DataFrame:
        return pandas.DataFrame(self.rows, columns=list(SERIES_COLUMNS))

    def mass_drift(self) -> float:
        mass = self.column('mass')
        if len(mass) == 0 or mass[0] == 0:
            return float(np.max(np.abs(mass))) if len(mass) else 0.0
        return float(np.max(np.abs(mass - mass[0])) / abs(mass[0]))


class VerdictKind(str, Enum):
    BOUNDED_RUN = 'BoundedRun'
    BLOWUP_SUSPECTED = 'BlowupSuspected'
    STEP_COLLAPSE = 'StepCollapse'
    HORIZON_REACHED = 'HorizonReached'


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    t_end: float
    sup_lp: float
    sup_linf: float

    @property
    def exit_code(self) -> int:
        if self.kind in (VerdictKind.BOUNDED_RUN, VerdictKind.HORIZON_REACHED):
            return 0
        return 2

    def summary(self) -> str:
        return f'verdict={self.kind.value} t_end={self.t_end!r} sup_lp={self.sup_lp!r} sup_linf={self.sup_linf!r}'
