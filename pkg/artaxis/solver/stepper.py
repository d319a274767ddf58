import logging
from dataclasses import replace
from typing import Callable, Optional, Sequence

import numpy as np

from artaxis.grid.field import ScalarField, linf_norm
from artaxis.grid.operators import taxis_divergence, solve_implicit_diffusion, face_slices
from artaxis.model.configuration_artaxis import ModelParams
from artaxis.solver.state import SimState
from artaxis.util.constants import NEGATIVE_TOLERANCE, DEFAULT_CFL_SAFETY, DEFAULT_DT_MIN, DEFAULT_DT_MAX
from artaxis.util.errors import StepRejectedError

# sources(t) -> (S_u, S_v, S_w) arrays (or None) appended to the right-hand sides
SourceTerms = Callable[[float], Sequence[Optional[np.ndarray]]]

SPEED_FLOOR = 1e-30


def _clip_undershoot(f: ScalarField, tolerance: float, name: str):
    lowest = f.min()
    if lowest >= 0.0:
        return f, 0.0
    if lowest < -tolerance:
        raise StepRejectedError(f'{name} undershoots to {lowest:.3e} (tolerance {tolerance:.1e})', undershoot=lowest)
    negative = np.minimum(f.values, 0.0)
    clipped = float(-negative.sum() * f.grid.cell_volume)
    return f.with_values(f.values - negative), clipped


def step(state: SimState, params: ModelParams, face_average: str = 'mean',
         sources: Optional[SourceTerms] = None) -> SimState:
    """One IMEX step: explicit taxis and production, backward-Euler diffusion and decay."""
    u, v, w, dt = state.u, state.v, state.w, state.dt
    extra = sources(state.t + dt) if sources is not None else (None, None, None)

    # −χ∇·(u∇v) + ξ∇·(u∇w) = ∇·(u∇(ξw − χv))
    potential = v.with_values(params.xi * w.values - params.chi * v.values)
    u_star = u.values + dt * taxis_divergence(u, potential, 1.0, face_average).values
    v_rhs = v.values + dt * params.production_f()(u.values)
    w_rhs = w.values + dt * params.production_g()(u.values)
    for rhs, term in zip((u_star, v_rhs, w_rhs), extra):
        if term is not None:
            rhs += dt * np.asarray(term)

    u_star = u.with_values(u_star)
    u_new = solve_implicit_diffusion(u_star, dt, 0.0)
    u_new, clipped = _clip_undershoot(u_new, NEGATIVE_TOLERANCE, 'u')
    v_new = solve_implicit_diffusion(v.with_values(v_rhs), dt, params.beta)
    # v, w: tolerance relative to their size
    v_new, _ = _clip_undershoot(v_new, NEGATIVE_TOLERANCE * max(1.0, linf_norm(v_new)), 'v')
    w_new = solve_implicit_diffusion(w.with_values(w_rhs), dt, params.delta)
    w_new, _ = _clip_undershoot(w_new, NEGATIVE_TOLERANCE * max(1.0, linf_norm(w_new)), 'w')
    if clipped > 0:
        logging.debug(f'[step] clipped {clipped:.3e} of negative mass at t={state.t + dt:.6f}')

    return replace(state, u=u_new, v=v_new, w=w_new, t=state.t + dt, clipped_mass=state.clipped_mass + clipped)


def adapt_dt(state: SimState, params: ModelParams, cfl_safety: float = DEFAULT_CFL_SAFETY,
             dt_min: float = DEFAULT_DT_MIN, dt_max: float = DEFAULT_DT_MAX) -> float:
    grid = state.grid
    ndim = state.u.values.ndim
    bound = min(h * h for h in grid.spacing) / (2.0 * grid.dim)
    for axis, h in enumerate(grid.spacing):
        left, right = face_slices(ndim, axis)
        speed = (params.chi * np.abs(state.v.values[right] - state.v.values[left])
                 + params.xi * np.abs(state.w.values[right] - state.w.values[left])) / h
        bound = min(bound, h / (float(speed.max()) + SPEED_FLOOR))
    return float(np.clip(cfl_safety * bound, dt_min, dt_max))
