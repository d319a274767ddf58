"""Analytic constants of the boundedness theory and the regime classifier.

All functions here are pure; the regularity constant 𝒞 is always an input
(either user supplied or an empirical lower bound from `artaxis.oracles`).
"""
import math
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from artaxis.model.configuration_artaxis import ModelParams
from artaxis.util.constants import DEFAULT_EPSILON, EPSILON_SCAN
from artaxis.util.errors import DomainError
from artaxis.util.utils import smart_float

REPORT_COLUMNS = ('regime', 'p_bar', 'A', 'Xi', 'gamma0_threshold', 'bracket', 'epsilon')


class Regime(str, Enum):
    BOUNDED_I = 'BoundedI'
    BOUNDED_II = 'BoundedII'
    BOUNDED_III = 'BoundedIII'
    BOUNDED_TWO_OVER_N = 'BoundedTwoOverN'
    BOUNDED_NEW_THEOREM = 'BoundedNewTheorem'
    UNKNOWN = 'Unknown'


def _require_positive(**values):
    for name, value in values.items():
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise DomainError(f'expect `{name}` > 0, but got {value!r}')


def _require_p_bar(p_bar):
    if not (isinstance(p_bar, (int, float)) and math.isfinite(p_bar) and p_bar > 1):
        raise DomainError(f'expect p_bar > 1, but got {p_bar!r}')


def compute_p_bar(n: int, k: float, l: float, beta: float, delta: float) -> float:
    """p̄ = max{n/2, k(1/β − 1), l(1/δ − 1)} + 1; negative branches enter the max as-is."""
    _require_positive(n=n, k=k, l=l, beta=beta, delta=delta)
    return max(n / 2, k * (1.0 / beta - 1.0), l * (1.0 / delta - 1.0)) + 1.0


def compute_A(p_bar: float, l: float, delta: float) -> float:
    _require_p_bar(p_bar)
    _require_positive(l=l, delta=delta)
    exponent = (l * (p_bar + l - 1.0) + p_bar) / (p_bar + l)
    value = 2.0 ** (-exponent) * (p_bar + l) / (p_bar + 2.0 * l + delta * (p_bar + l))
    assert 0.0 < value < 1.0, f'expect A in (0, 1), but got {value}'
    return value


def compute_log_xi_const(p_bar: float, l: float, c_reg: float, gamma1: float) -> float:
    """log Ξ; Ξ itself leaves the float range for large p̄/l."""
    _require_p_bar(p_bar)
    _require_positive(l=l, c_reg=c_reg, gamma1=gamma1)
    return (math.log(l / (p_bar + l))
            - (p_bar / l) * (math.log(c_reg) + math.log(gamma1))
            - p_bar * (p_bar + (p_bar + l - 1.0) * l) / (l * (p_bar + l)) * math.log(2.0))


def compute_xi_const(p_bar: float, l: float, c_reg: float, gamma1: float) -> float:
    """Young-splitting weight Ξ chosen so that the decisive bracket closes; may round to 0 or inf."""
    with np.errstate(over='ignore', under='ignore'):
        return float(np.exp(compute_log_xi_const(p_bar, l, c_reg, gamma1)))


def gamma0_threshold(A_const: float, c_reg: float, gamma1: float) -> float:
    _require_positive(A_const=A_const, gamma1=gamma1)
    if not c_reg >= 0:
        raise DomainError(f'expect c_reg >= 0, but got {c_reg!r}')
    return c_reg * gamma1 / A_const


def admissible_gamma0_range(A_const: float, c_reg: float, gamma1: float) -> Optional[Tuple[float, float]]:
    """The half-open interval (𝒜⁻¹𝒞γ₁, γ₁] of admissible γ₀, or None when 𝒞 ≥ 𝒜."""
    if c_reg >= A_const:
        return None
    return gamma0_threshold(A_const, c_reg, gamma1), gamma1


def _resolve_log_xi(xi_const, log_xi):
    if log_xi is not None:
        if not math.isfinite(log_xi):
            raise DomainError(f'expect a finite log Xi, but got {log_xi!r}')
        return log_xi
    _require_positive(xi_const=xi_const)
    return math.log(xi_const)


def bracket_coefficient(p_bar, l, delta, xi_const, c_reg, gamma1, gamma0, epsilon,
                        log_xi: Optional[float] = None) -> float:
    """Left side of the decisive inequality; pass `log_xi` when Ξ is outside the float range."""
    _require_p_bar(p_bar)
    _require_positive(l=l, delta=delta, c_reg=c_reg, gamma1=gamma1, epsilon=epsilon)
    if not gamma0 >= 0:
        raise DomainError(f'expect gamma0 >= 0, but got {gamma0!r}')
    log_xi = _resolve_log_xi(xi_const, log_xi)
    q = (p_bar + l) / l
    log_first = (log_xi + q * (math.log(c_reg) + math.log(gamma1))
                 + (p_bar / l + p_bar + l - 1.0) * math.log(2.0))
    log_second = (math.log(p_bar / (p_bar + l)) - (l / p_bar) * math.log(q)
                  - (l / p_bar) * log_xi)
    with np.errstate(over='ignore'):
        inner = float(np.exp(log_first) + np.exp(log_second))
    return (1.0 + delta + l / (p_bar + l)) * inner + epsilon - gamma0


def scan_epsilon(p_bar, l, delta, xi_const, c_reg, gamma1, gamma0, scan=EPSILON_SCAN, fallback=DEFAULT_EPSILON,
                 log_xi: Optional[float] = None):
    """Largest ε of the scan set closing the bracket, with its bracket value.

    Falls back to `fallback` (and its positive bracket) when nothing passes.
    """
    log_xi = _resolve_log_xi(xi_const, log_xi)
    for epsilon in sorted(scan, reverse=True):
        value = bracket_coefficient(p_bar, l, delta, xi_const, c_reg, gamma1, gamma0, epsilon, log_xi=log_xi)
        if value <= 0:
            return epsilon, value
    return fallback, bracket_coefficient(p_bar, l, delta, xi_const, c_reg, gamma1, gamma0, fallback, log_xi=log_xi)


def regime_intervals(n: int):
    _require_positive(n=n)
    return dict(
        lower=1.0 / n,
        upper=1.0 / n + 2.0 / (n * n + 4.0),
        two_over_n=2.0 / n
    )


def falsify_condition(A_const: float, c_lower: float) -> str:
    # an empirical lower bound can refute 𝒞 < 𝒜 but never confirm it
    if c_lower >= A_const:
        return f'condition C < A falsified at C = {smart_float(c_lower)} (A = {smart_float(A_const)})'
    return f'condition C < A not falsified (C >= {smart_float(c_lower)}, A = {smart_float(A_const)})'


@dataclass
class RegimeReport:
    regime: Regime
    p_bar: float
    A_const: float
    xi_const: float
    gamma0_threshold: float
    c_reg: float
    bracket_value: float
    epsilon: float
    notes: str = field(default='')

    def to_row(self):
        return dict(
            regime=self.regime.value,
            p_bar=self.p_bar,
            A=self.A_const,
            Xi=self.xi_const,
            gamma0_threshold=self.gamma0_threshold,
            bracket=self.bracket_value,
            epsilon=self.epsilon
        )

    def to_text(self):
        lines = []
        for key, value in asdict(self).items():
            if isinstance(value, Regime):
                value = value.value
            elif isinstance(value, float):
                value = smart_float(value)
            lines.append(f'{key} = {value}')
        return '\n'.join(lines)


def classify_regime(p: ModelParams, c_reg: float, epsilon_scan=EPSILON_SCAN,
                    epsilon: float = DEFAULT_EPSILON) -> RegimeReport:
    _require_positive(c_reg=c_reg)
    n, k, l = p.dim, p.k, p.l
    p_bar = compute_p_bar(n, k, l, p.beta, p.delta)
    A_const = compute_A(p_bar, l, p.delta)
    log_xi = compute_log_xi_const(p_bar, l, c_reg, p.gamma1)
    xi_const = compute_xi_const(p_bar, l, c_reg, p.gamma1)
    threshold = gamma0_threshold(A_const, c_reg, p.gamma1)
    epsilon, bracket = scan_epsilon(p_bar, l, p.delta, xi_const, c_reg, p.gamma1, p.gamma0,
                                   epsilon_scan, epsilon, log_xi=log_xi)

    edges = regime_intervals(n)

    def closed_low(x):
        return 0 < x <= edges['lower']

    def open_mid(x):
        return edges['lower'] < x < edges['upper']

    notes = []
    if not 0.0 < xi_const < math.inf:
        notes.append(f'Xi outside float range (log Xi = {smart_float(log_xi)}); bracket evaluated in log space')
    if closed_low(k) and closed_low(l):
        regime = Regime.BOUNDED_I
    elif (open_mid(l) and closed_low(k)) or (open_mid(k) and closed_low(l)):
        regime = Regime.BOUNDED_II
    elif open_mid(k) and open_mid(l):
        regime = Regime.BOUNDED_III
    elif k < edges['two_over_n'] and l < edges['two_over_n']:
        regime = Regime.BOUNDED_TWO_OVER_N
    elif k < l and c_reg < A_const and p.gamma0 > threshold:
        regime = Regime.BOUNDED_NEW_THEOREM
    else:
        regime = Regime.UNKNOWN

    if k >= l:
        notes.append('k >= l: largeness rule on gamma0 not applicable')
    if c_reg >= A_const:
        notes.append('no admissible (gamma0, gamma1): C >= A')
    elif p.gamma0 <= threshold:
        notes.append('gamma0 does not exceed A^-1 C gamma1')
    if regime is Regime.UNKNOWN:
        notes.append('no sufficient condition applies; this is not a blow-up claim')

    return RegimeReport(
        regime=regime,
        p_bar=p_bar,
        A_const=A_const,
        xi_const=xi_const,
        gamma0_threshold=threshold,
        c_reg=c_reg,
        bracket_value=bracket,
        epsilon=epsilon,
        notes='; '.join(notes)
    )
