"""The a priori estimates behind the L^p bound, evaluated along a computed run.

Every check compares both sides of one estimate at each recorded sample.
Time integrals ∫₀ᵗ eˢ(·) ds use the trapezoidal rule over the sample times;
time derivatives are the semidiscrete right-hand sides of the scheme, so
w_t = Δ_h w − δw + g(u) and u_t = Δ_h u + ∇_h·(u∇_h(ξw − χv)).

The regularity constant enters as a number (usually the empirical lower
bound of `estimate_c_rho`). A failed regularity estimate therefore says
that this run needs a larger constant, not that the theory is wrong; the
pointwise steps and the growth inequality hold for any admissible input.
"""
import math
from dataclasses import dataclass, field
from datetime import datetime
from typing import List, Sequence, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from artaxis.grid.field import Grid, ScalarField
from artaxis.grid.operators import laplacian_neumann, taxis_divergence
from artaxis.model.configuration_artaxis import ModelParams
from artaxis.oracles.inequalities import _holds
from artaxis.oracles.regularity import _lq_norm, _require_exponent
from artaxis.solver.callback import SimulationCallback
from artaxis.solver.runner import RunnerArguments, SimulationRunner
from artaxis.solver.state import Verdict
from artaxis.util.constants import ULP_FACTOR, BEGIN_LINE, END_LINE, TRAJECTORY_RTOL
from artaxis.util.errors import DomainError
from artaxis.util.utils import rank0_print, smart_float

W_REGULARITY = 'w-regularity'
V_REGULARITY = 'v-regularity'
LP_GROWTH = 'lp-growth'

CHECK_COLUMNS = ('name', 'q', 'c_reg', 'samples', 'worst_excess', 'worst_t', 'holds', 'pointwise_holds')


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    u: ScalarField
    v: ScalarField
    w: ScalarField


class TrajectoryRecorder(SimulationCallback):
    """Keeps (t, u, v, w) at the start and at every sample of a run."""

    def __init__(self):
        self.samples: List[TrajectorySample] = []

    def _record(self, state):
        self.samples.append(TrajectorySample(state.t, state.u, state.v, state.w))

    def on_run_begin(self, state, series):
        self._record(state)

    def on_sample(self, state, series):
        self._record(state)


def record_trajectory(params: ModelParams, grid: Grid, init, arguments: RunnerArguments,
                      callbacks: Sequence[SimulationCallback] = ()) -> Tuple[List[TrajectorySample], Verdict]:
    recorder = TrajectoryRecorder()
    _, verdict, _ = SimulationRunner(arguments).run(params, grid, init, callbacks=[recorder, *callbacks])
    return recorder.samples, verdict


@dataclass
class EstimateCheck:
    name: str
    times: np.ndarray = field(repr=False)
    lhs: np.ndarray = field(repr=False)
    rhs: np.ndarray = field(repr=False)
    q: float = field(default=math.nan)
    c_reg: float = field(default=math.nan)
    pointwise_holds: bool = field(default=True)

    @property
    def excess(self) -> np.ndarray:
        """(lhs − rhs)/max(|lhs|, |rhs|); positive where the estimate fails, −1 where both sides vanish."""
        scale = np.maximum(np.abs(self.lhs), np.abs(self.rhs))
        with np.errstate(divide='ignore', invalid='ignore'):
            return np.where(scale > 0, (self.lhs - self.rhs) / scale, -1.0)

    @property
    def worst_index(self) -> int:
        return int(np.argmax(self.excess))

    @property
    def holds(self) -> bool:
        slack = TRAJECTORY_RTOL * np.maximum(np.abs(self.lhs), np.abs(self.rhs))
        return bool(self.pointwise_holds and np.all(self.lhs <= self.rhs + slack))

    def to_row(self):
        index = self.worst_index
        return dict(
            name=self.name,
            q=self.q,
            c_reg=self.c_reg,
            samples=len(self.times),
            worst_excess=float(self.excess[index]),
            worst_t=float(self.times[index]),
            holds=self.holds,
            pointwise_holds=self.pointwise_holds
        )

    def to_text(self):
        return '\n'.join(f'{self.name}.{key} = {smart_float(value) if isinstance(value, float) else value}'
                         for key, value in self.to_row().items() if key != 'name')


def _times(samples: Sequence[TrajectorySample]) -> np.ndarray:
    if len(samples) < 2:
        raise DomainError(f'expect at least two samples of the run, but got {len(samples)}')
    times = np.array([sample.t for sample in samples])
    assert np.all(np.diff(times) > 0), 'expect strictly increasing sample times'
    return times


def _weighted_integral(times, densities):
    """∫₀ᵗ eˢ F(s) ds at every sample time, F given at the samples."""
    return cumulative_trapezoid(np.exp(times) * np.asarray(densities), times, initial=0.0)


def _power_integral(values: np.ndarray, exponent: float, grid: Grid) -> float:
    return float(np.sum(np.power(np.abs(values), exponent)) * grid.cell_volume)


def _initial_norm(f: ScalarField, q: float) -> float:
    # stands in for the trace-space norm of the initial datum
    volume = f.grid.cell_volume
    return (_lq_norm(f.values, q, volume) + _lq_norm(laplacian_neumann(f).values, q, volume)) ** q


def _w_rate(sample: TrajectorySample, params: ModelParams) -> np.ndarray:
    return (laplacian_neumann(sample.w).values - params.delta * sample.w.values
            + params.production_g()(sample.u.values))


def _u_rate(sample: TrajectorySample, params: ModelParams, face_average: str) -> np.ndarray:
    potential = sample.v.with_values(params.xi * sample.w.values - params.chi * sample.v.values)
    return laplacian_neumann(sample.u).values + taxis_divergence(sample.u, potential, 1.0, face_average).values


def _bounded_by(lhs, rhs) -> bool:
    # both sides nonnegative; powers of powers agree only to a few ulps of the exponent
    return bool(np.all(lhs <= rhs * (1.0 + TRAJECTORY_RTOL)))


def power_sum_step_holds(u: np.ndarray, exponent: float) -> bool:
    """(u + 1)^r ≤ 2^{r−1}(u^r + 1) at every u ≥ 0, for r = `exponent` ≥ 1."""
    u = np.maximum(np.asarray(u, dtype=float), 0.0)
    lhs = np.power(u + 1.0, exponent)
    rhs = np.power(2.0, exponent - 1.0) * (np.power(u, exponent) + 1.0)
    return bool(np.all(_holds(lhs, rhs, ULP_FACTOR * math.ceil(exponent))))


def check_w_regularity_estimate(samples: Sequence[TrajectorySample], params: ModelParams, p: float,
                                c_reg: float) -> EstimateCheck:
    """∫₀ᵗ eˢ∫|w_t + w/q|^q ≤ 2^{p/l} 𝒞^q [‖w₀‖^q + γ₁^q 2^{p+l−1}(∫₀ᵗ eˢ∫u^{p+l} + |Ω|(eᵗ − 1))].

    q = (p + l)/l and 𝒞 = `c_reg` for ρ = δ. The pointwise steps g(u)^q ≤ γ₁^q(1 + u)^{p+l}
    and (u + 1)^{p+l} ≤ 2^{p+l−1}(u^{p+l} + 1) are checked at every cell of every sample.
    """
    l, gamma1 = params.l, params.gamma1
    q = (p + l) / l
    _require_exponent(params.delta, q)
    times = _times(samples)
    grid = samples[0].u.grid
    g = params.production_g()

    densities, upl = [], []
    pointwise = True
    for sample in samples:
        u, w = sample.u.values, sample.w.values
        densities.append(_power_integral(_w_rate(sample, params) + w / q, q, grid))
        upl.append(_power_integral(u, p + l, grid))
        source = np.power(g(u), q)
        envelope = gamma1 ** q * np.power(1.0 + np.maximum(u, 0.0), p + l)
        pointwise = pointwise and _bounded_by(source, envelope)
        pointwise = pointwise and power_sum_step_holds(u, p + l)

    lhs = _weighted_integral(times, densities)
    source = gamma1 ** q * 2.0 ** (p + l - 1.0) * (_weighted_integral(times, upl) + grid.measure * np.expm1(times))
    rhs = 2.0 ** (p / l) * c_reg ** q * (_initial_norm(samples[0].w, q) + source)
    return EstimateCheck(W_REGULARITY, times, lhs, rhs, q=q, c_reg=c_reg, pointwise_holds=pointwise)


def check_v_regularity_estimate(samples: Sequence[TrajectorySample], params: ModelParams, p: float,
                                c_reg: float) -> EstimateCheck:
    """∫₀ᵗ eˢ∫|Δv|^q ≤ 2^{q−1} 𝒞^q [‖v₀‖^q + α^q ∫₀ᵗ eˢ∫u^{p+k}] with q = (p + k)/k, ρ = β.

    Pointwise: f(u)^q ≤ α^q u^{p+k}.
    """
    k, alpha = params.k, params.alpha
    q = (p + k) / k
    _require_exponent(params.beta, q)
    times = _times(samples)
    grid = samples[0].u.grid
    f = params.production_f()

    densities, upk = [], []
    pointwise = True
    for sample in samples:
        u = np.maximum(sample.u.values, 0.0)
        densities.append(_power_integral(laplacian_neumann(sample.v).values, q, grid))
        upk.append(_power_integral(u, p + k, grid))
        pointwise = pointwise and _bounded_by(np.power(f(u), q), alpha ** q * np.power(u, p + k))

    lhs = _weighted_integral(times, densities)
    source = alpha ** q * _weighted_integral(times, upk)
    rhs = 2.0 ** (q - 1.0) * c_reg ** q * (_initial_norm(samples[0].v, q) + source)
    return EstimateCheck(V_REGULARITY, times, lhs, rhs, q=q, c_reg=c_reg, pointwise_holds=pointwise)


def taxis_young_constant(p: float, k: float, chi: float) -> float:
    """c with (p−1)χ a b ≤ a^{(p+k)/p} + c b^{(p+k)/k} for a, b ≥ 0."""
    return k / (p + k) * ((p + k) / p) ** (-p / k) * ((p - 1.0) * chi) ** ((p + k) / k)


def lp_growth_bound(sample: TrajectorySample, params: ModelParams, p: float, xi_const: float,
                    face_average: str = 'mean') -> Tuple[float, float]:
    """(d/dt ∫u^p, its upper bound) at one sample.

    The bound is ∫u^{p+k} + c∫|Δv|^{(p+k)/k} + (p−1)ξΞ∫|w_t + w/q|^q + (p−1)ξΞ(δ + 1/q)∫w^q
    + (p−1)ξ[p/(p+l) q^{−l/p} Ξ^{−l/p} (1 + δ + 1/q) − γ₀]∫u^{p+l}, q = (p + l)/l.
    """
    k, l, xi, delta = params.k, params.l, params.xi, params.delta
    q = (p + l) / l
    grid = sample.u.grid
    u = np.maximum(sample.u.values, 0.0)
    w = sample.w.values

    rate = float(np.sum(p * np.power(u, p - 1.0) * _u_rate(sample, params, face_average)) * grid.cell_volume)
    bracket = p / (p + l) * q ** (-l / p) * xi_const ** (-l / p) * (1.0 + delta + 1.0 / q) - params.gamma0
    bound = (_power_integral(u, p + k, grid)
             + taxis_young_constant(p, k, params.chi) * _power_integral(laplacian_neumann(sample.v).values,
                                                                        (p + k) / k, grid)
             + (p - 1.0) * xi * xi_const * _power_integral(_w_rate(sample, params) + w / q, q, grid)
             + (p - 1.0) * xi * xi_const * (delta + 1.0 / q) * _power_integral(w, q, grid)
             + (p - 1.0) * xi * bracket * _power_integral(u, p + l, grid))
    return rate, bound


def check_lp_growth_inequality(samples: Sequence[TrajectorySample], params: ModelParams, p: float,
                               xi_const: float = 1.0, face_average: str = 'mean') -> EstimateCheck:
    """d/dt ∫u^p against the bound of `lp_growth_bound` at every sample; holds for any Ξ > 0."""
    if not p > 1:
        raise DomainError(f'expect p > 1, but got {p!r}')
    if not (math.isfinite(xi_const) and xi_const > 0):
        raise DomainError(f'expect a finite Xi > 0, but got {xi_const!r}')
    times = _times(samples)
    sides = np.array([lp_growth_bound(sample, params, p, xi_const, face_average) for sample in samples])
    return EstimateCheck(LP_GROWTH, times, sides[:, 0], sides[:, 1], q=(p + params.l) / params.l)


def check_trajectory_estimates(samples: Sequence[TrajectorySample], params: ModelParams, p: float,
                               c_w: float, c_v: float, xi_const: float = 1.0,
                               face_average: str = 'mean') -> List[EstimateCheck]:
    rank0_print(BEGIN_LINE)
    rank0_print(f'[{datetime.now()}] Checking estimates on {len(samples)} samples: p={p:g}, '
                f'C_delta={c_w:.6e}, C_beta={c_v:.6e}, Xi={xi_const:.6e}')
    checks = [
        check_w_regularity_estimate(samples, params, p, c_w),
        check_v_regularity_estimate(samples, params, p, c_v),
        check_lp_growth_inequality(samples, params, p, xi_const, face_average)
    ]
    for check in checks:
        row = check.to_row()
        rank0_print(f'{check.name}: holds={row["holds"]} worst excess={row["worst_excess"]:.6e} '
                    f'at t={row["worst_t"]:.6f}')
    rank0_print(END_LINE)
    return checks
