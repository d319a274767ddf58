"""Manufactured-solution convergence study for the coupled stepper.

Sources for prescribed exact fields are derived symbolically and appended to
each equation; the scheme is run at dt ∝ h² on three refinements.
"""
import math
from dataclasses import dataclass, field
from datetime import datetime
from typing import Callable, Dict, List, Tuple

import numpy as np
import sympy

from artaxis.grid.field import Grid, ScalarField
from artaxis.model.configuration_artaxis import ModelParams, validate_params
from artaxis.solver.state import SimState
from artaxis.solver.stepper import step
from artaxis.util.constants import BEGIN_LINE, END_LINE
from artaxis.util.utils import rank0_print

FIELDS = ('u', 'v', 'w')
MMS_HORIZON = 0.1
MMS_DT_FACTOR = 0.25
MMS_MIN_ORDER = 1.7
MMS_EXACT_TOLERANCE = 1e-12

x, y, t = sympy.symbols('x y t', real=True)


def _cosine_1d():
    decay = sympy.exp(-t)
    return (2 + sympy.cos(sympy.pi * x) * decay,
            1 + sympy.cos(sympy.pi * x) * decay / 2,
            1 + sympy.cos(2 * sympy.pi * x) * decay / 2)


def _cosine_2d():
    decay = sympy.exp(-t)
    mode = sympy.cos(sympy.pi * x) * sympy.cos(sympy.pi * y)
    return (2 + mode * decay,
            1 + mode * decay / 2,
            1 + sympy.cos(2 * sympy.pi * x) * sympy.cos(sympy.pi * y) * decay / 2)


def _constant_2d(params):
    u = sympy.Integer(2)
    return u, params.alpha * u ** params.k / params.beta, params.gamma_production * (1 + u) ** params.l / params.delta


@dataclass(frozen=True)
class MmsCase:
    name: str
    dim: int
    cells: Tuple[int, ...]
    exact: Callable


MMS_CASES = {
    'cosine-1d': MmsCase('cosine-1d', 1, (32, 64, 128), lambda params: _cosine_1d()),
    'cosine-2d': MmsCase('cosine-2d', 2, (16, 32, 64), lambda params: _cosine_2d()),
    'constant-2d': MmsCase('constant-2d', 2, (16, 32, 64), _constant_2d),
}


def mms_params(dim: int) -> ModelParams:
    return validate_params(ModelParams(chi=1.0, xi=1.0, beta=1.0, delta=1.0, alpha=1.0,
                                       gamma0=1.0, gamma1=1.0, k=0.5, l=0.5, dim=dim))


@dataclass
class MmsReport:
    case: str
    cells: Tuple[int, ...]
    errors: Dict[str, List[float]]
    orders: Dict[str, List[float]]
    exact_case: bool = field(default=False)

    @property
    def observed_orders(self) -> Dict[str, float]:
        return {name: orders[-1] for name, orders in self.orders.items()}

    @property
    def passed(self) -> bool:
        if self.exact_case:
            return all(max(errors) <= MMS_EXACT_TOLERANCE for errors in self.errors.values())
        return all(order >= MMS_MIN_ORDER for order in self.observed_orders.values())

    def to_text(self):
        lines = [f'case = {self.case}', f'cells = {", ".join(str(n) for n in self.cells)}']
        for name in FIELDS:
            lines.append(f'error_{name} = {", ".join(f"{e:.6e}" for e in self.errors[name])}')
            lines.append(f'order_{name} = {", ".join(f"{o:.4f}" for o in self.orders[name])}')
        lines.append(f'passed = {self.passed}')
        return '\n'.join(lines)


def manufactured_sources(exact, params: ModelParams, dim: int):
    """Symbolic (S_u, S_v, S_w) making `exact` solve the forced system."""
    u, v, w = exact
    coords = (x, y)[:dim]

    def laplacian(e):
        return sum(sympy.diff(e, c, 2) for c in coords)

    def taxis(a, b):
        return sum(sympy.diff(a * sympy.diff(b, c), c) for c in coords)

    s_u = sympy.diff(u, t) - laplacian(u) + params.chi * taxis(u, v) - params.xi * taxis(u, w)
    s_v = sympy.diff(v, t) - laplacian(v) + params.beta * v - params.alpha * u ** params.k
    s_w = sympy.diff(w, t) - laplacian(w) + params.delta * w - params.gamma_production * (1 + u) ** params.l
    return s_u, s_v, s_w


def _numeric(expr, dim: int):
    fn = sympy.lambdify((x, t) if dim == 1 else (x, y, t), expr, 'numpy')

    def evaluate(grid: Grid, time: float) -> np.ndarray:
        return np.broadcast_to(np.asarray(fn(*grid.centers(), time), dtype=float), grid.shape).copy()

    return evaluate


def _run_case(grid: Grid, params: ModelParams, exact_fns, source_fns, horizon: float) -> Dict[str, float]:
    n_steps = math.ceil(horizon / (MMS_DT_FACTOR * min(grid.spacing) ** 2))
    dt = horizon / n_steps
    u, v, w = (ScalarField(grid, fn(grid, 0.0)) for fn in exact_fns)
    state = SimState(u, v, w, t=0.0, dt=dt)

    def sources(time):
        return tuple(fn(grid, time) for fn in source_fns)

    for _ in range(n_steps):
        state = step(state, params, sources=sources)
    errors = {}
    for name, fn in zip(FIELDS, exact_fns):
        diff = getattr(state, name).values - fn(grid, horizon)
        errors[name] = float(np.sqrt(np.sum(diff ** 2) * grid.cell_volume))
    return errors


def mms_convergence(test_case: str, horizon: float = MMS_HORIZON) -> MmsReport:
    assert test_case in MMS_CASES, f'Invalid MMS case, expected one from `{list(MMS_CASES)}`, but got `{test_case}`'
    case = MMS_CASES[test_case]
    params = mms_params(case.dim)
    exact = case.exact(params)
    exact_fns = [_numeric(e, case.dim) for e in exact]
    source_fns = [_numeric(s, case.dim) for s in manufactured_sources(exact, params, case.dim)]

    rank0_print(BEGIN_LINE)
    rank0_print(f'[{datetime.now()}] MMS case {case.name}: cells {case.cells}, horizon {horizon:g}')
    errors = {name: [] for name in FIELDS}
    for n in case.cells:
        grid = Grid.unit(case.dim, n)
        for name, error in _run_case(grid, params, exact_fns, source_fns, horizon).items():
            errors[name].append(error)
        rank0_print(f'[{datetime.now()}] n={n}: ' + ', '.join(f'{name}={errors[name][-1]:.3e}' for name in FIELDS))

    orders = {}
    for name, values in errors.items():
        orders[name] = [math.log2(coarse / fine) if coarse > 0 and fine > 0 else float('nan')
                        for coarse, fine in zip(values[:-1], values[1:])]
    report = MmsReport(case=case.name, cells=case.cells, errors=errors, orders=orders,
                       exact_case=not any(sympy.sympify(e).free_symbols for e in exact))
    rank0_print(report.to_text())
    rank0_print(END_LINE)
    return report
