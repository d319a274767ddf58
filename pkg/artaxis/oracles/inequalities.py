"""Pointwise oracles for the elementary inequalities behind the L^p estimates.

Every function here checks an inequality that is known to hold; a reported
violation means a bug in the evaluation, not in the mathematics.
"""
import math
from typing import Tuple

import numpy as np

from artaxis.util.constants import ULP_FACTOR
from artaxis.util.errors import DomainError

ABSORPTION_SCAN_MAX = 1e9
ABSORPTION_SCAN_POINTS = 4001


def _holds(lhs, rhs, ulps):
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), np.finfo(float).tiny)
    return lhs <= rhs + ulps * np.spacing(scale)


def _power_sum_holds(a, b, p):
    lhs = np.power(a + b, p)
    rhs = np.power(2.0, p - 1.0) * (np.power(a, p) + np.power(b, p))
    # rounding of a + b is amplified by the exponent
    return _holds(lhs, rhs, ULP_FACTOR * np.ceil(p))


def check_power_sum_inequality(A: float, B: float, p: float) -> bool:
    """(A + B)^p ≤ 2^{p−1}(A^p + B^p) for A, B ≥ 0 and p ≥ 1."""
    if not (A >= 0 and B >= 0):
        raise DomainError(f'expect A, B >= 0, but got A={A!r}, B={B!r}')
    if not p >= 1:
        raise DomainError(f'expect p >= 1, but got {p!r}')
    return bool(_power_sum_holds(float(A), float(B), float(p)))


def _young_coefficient(p, l, Xi):
    return p / (p + l) * np.power(Xi * (p + l) / l, -l / p)


def _young_splitting_holds(u, w, wt, p, l, xi, delta, Xi):
    q = (p + l) / l
    coefficient = _young_coefficient(p, l, Xi)
    up = np.power(u, p)
    upl = np.power(u, p + l)
    wq = np.power(np.abs(w), q)

    # (p−1)ξ u^p |w_t| split through |w_t| ≤ |w_t + w/q| + |w|/q
    lhs_t = (p - 1.0) * xi * up * np.abs(wt)
    rhs_t = ((p - 1.0) * xi * Xi * np.power(np.abs(wt + w / q), q)
             + xi * (p - 1.0) * coefficient * (1.0 + l / (p + l)) * upl
             + l * xi * Xi * (p - 1.0) / (p + l) * wq)
    # (p−1)ξδ u^p w
    lhs_w = (p - 1.0) * xi * delta * up * w
    rhs_w = (p - 1.0) * xi * delta * Xi * wq + xi * delta * (p - 1.0) * coefficient * upl

    ulps = ULP_FACTOR * np.ceil(np.maximum(q, p + l))
    return _holds(lhs_t, rhs_t, ulps) & _holds(lhs_w, rhs_w, ulps)


def check_young_splitting(u_val: float, w_val: float, wt_val: float, p: float, l: float,
                          xi: float, delta: float, Xi: float) -> bool:
    """Both pointwise Young splittings of u^p|w_t| and u^p w with weight Ξ and q = (p+l)/l."""
    if not u_val >= 0:
        raise DomainError(f'expect u >= 0, but got {u_val!r}')
    if not p > 1:
        raise DomainError(f'expect p > 1, but got {p!r}')
    for name, value in (('l', l), ('xi', xi), ('delta', delta), ('Xi', Xi)):
        if not value > 0:
            raise DomainError(f'expect `{name}` > 0, but got {value!r}')
    return bool(_young_splitting_holds(float(u_val), float(w_val), float(wt_val), p, l, xi, delta, Xi))


def young_absorption_constant(c_hat: float, a: float, b: float, eps: float) -> float:
    """Smallest c with ĉ s^a ≤ (ε/2) s^b + c for all s ≥ 0 (0 < a < b).

    The maximum of ĉ s^a − (ε/2) s^b sits at s* = (ĉ a / ((ε/2) b))^{1/(b−a)}
    and equals ĉ (s*)^a (1 − a/b).
    """
    assert 0 < a < b, f'expect 0 < a < b, but got a={a}, b={b}'
    return c_hat * _absorption_maximizer(c_hat, a, b, eps) ** a * (1.0 - a / b)


def _absorption_maximizer(c_hat, a, b, eps):
    return math.exp((math.log(c_hat * a) - math.log(0.5 * eps * b)) / (b - a))


def check_lower_order_absorption(c_hat: float, p: float, k: float, l: float, eps: float) -> Tuple[float, float]:
    """Constants c₁, c₂ with ĉ s^p ≤ (ε/2) s^{p+l} + c₁ and ĉ s^{p+k} ≤ (ε/2) s^{p+l} + c₂.

    Both bounds are verified on a log grid of s up to 1e9 and at the maximizers.
    """
    for name, value in (('c_hat', c_hat), ('k', k), ('l', l), ('eps', eps)):
        if not value > 0:
            raise DomainError(f'expect `{name}` > 0, but got {value!r}')
    if not p > 1:
        raise DomainError(f'expect p > 1, but got {p!r}')
    if not k < l:
        raise DomainError(f'absorption of u^(p+k) needs k < l, but got k={k!r}, l={l!r}')

    constants = []
    for a in (p, p + k):
        c = young_absorption_constant(c_hat, a, p + l, eps)
        s = np.concatenate([np.logspace(-9.0, math.log10(ABSORPTION_SCAN_MAX), ABSORPTION_SCAN_POINTS),
                            [_absorption_maximizer(c_hat, a, p + l, eps)]])
        with np.errstate(over='ignore', invalid='ignore'):
            gap = c_hat * np.power(s, a) - 0.5 * eps * np.power(s, p + l)
        # inf - inf only happens far beyond the maximizer, where the gap is negative
        gap = np.where(np.isnan(gap), -np.inf, gap)
        # the maximizer is only known up to rounding: allow a relative slack
        assert np.all(gap <= c * (1.0 + 1e-9) + np.spacing(c)), \
            f'expect c_hat s^{a} - eps/2 s^{p + l} <= {c}, but got max {gap.max()}'
        constants.append(c)
    return constants[0], constants[1]


def power_sum_sweep(samples: int = 100000, seed: int = 0, bound: float = 1e3, p_max: float = 10.0) -> int:
    """Number of violations over `samples` random (A, B, p) ∈ [0, bound]² × [1, p_max]."""
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.0, bound, samples)
    b = rng.uniform(0.0, bound, samples)
    p = rng.uniform(1.0, p_max, samples)
    return int(np.count_nonzero(~_power_sum_holds(a, b, p)))


def young_splitting_sweep(samples: int = 100000, seed: int = 0) -> int:
    """Number of violations over random tuples with p ∈ (1, 6), l ∈ (0.1, 3), Ξ ∈ (1e-3, 1e3)."""
    rng = np.random.default_rng(seed)
    p = rng.uniform(1.0, 6.0, samples)
    p = np.where(p > 1.0, p, 1.0 + 1e-9)
    l = rng.uniform(0.1, 3.0, samples)
    Xi = np.power(10.0, rng.uniform(-3.0, 3.0, samples))
    xi = np.power(10.0, rng.uniform(-1.0, 1.0, samples))
    delta = np.power(10.0, rng.uniform(-1.0, 1.0, samples))
    u = rng.uniform(0.0, 10.0, samples)
    w = rng.uniform(0.0, 10.0, samples)
    wt = rng.uniform(-10.0, 10.0, samples)
    return int(np.count_nonzero(~_young_splitting_holds(u, w, wt, p, l, xi, delta, Xi)))
