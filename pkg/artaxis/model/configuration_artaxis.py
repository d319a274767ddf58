import math
from dataclasses import dataclass, field, fields, replace
from typing import Optional

from artaxis.util.errors import NonPositiveCoefficientError, GammaOrderViolationError

POSITIVE_FIELDS = ('chi', 'xi', 'beta', 'delta', 'alpha', 'gamma0', 'gamma1', 'k', 'l')


@dataclass(frozen=True)
class ModelParams:
    """Coefficients of the attraction-repulsion system.

    u_t = Δu − χ∇·(u∇v) + ξ∇·(u∇w),  v_t = Δv − βv + f(u),  w_t = Δw − δw + g(u)
    with 0 ≤ f(s) ≤ α s^k and γ₀(1+s)^l ≤ g(s) ≤ γ₁(1+s)^l.

    `gamma_g` picks the representative repulsion production g(s) = γ_g (1+s)^l and
    defaults to the midpoint of [γ₀, γ₁].
    """
    chi: float
    xi: float
    beta: float
    delta: float
    alpha: float
    gamma0: float
    gamma1: float
    k: float
    l: float
    dim: int = field(default=2)
    gamma_g: Optional[float] = field(default=None)

    @property
    def gamma_production(self) -> float:
        if self.gamma_g is not None:
            return self.gamma_g
        return 0.5 * (self.gamma0 + self.gamma1)

    def production_f(self):
        from artaxis.model.production import AttractionProduction
        return AttractionProduction(coefficient=self.alpha, exponent=self.k)

    def production_g(self):
        from artaxis.model.production import RepulsionProduction
        return RepulsionProduction(coefficient=self.gamma_production, exponent=self.l)

    def homogeneous_state(self, c: float):
        """Spatially constant equilibrium (c, f(c)/β, g(c)/δ)."""
        return c, float(self.production_f()(c)) / self.beta, float(self.production_g()(c)) / self.delta

    def with_updates(self, **kwargs) -> 'ModelParams':
        return validate_params(replace(self, **kwargs))

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def validate_params(p: ModelParams) -> ModelParams:
    for name in POSITIVE_FIELDS:
        value = getattr(p, name)
        if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
            raise NonPositiveCoefficientError(name, value)
    if not isinstance(p.dim, int) or p.dim < 1:
        raise NonPositiveCoefficientError('dim', p.dim)
    if p.gamma0 > p.gamma1:
        raise GammaOrderViolationError(p.gamma0, p.gamma1)
    if p.gamma_g is not None:
        if p.gamma_g < p.gamma0:
            raise GammaOrderViolationError(p.gamma0, p.gamma_g, names=('gamma0', 'gamma_g'))
        if p.gamma_g > p.gamma1:
            raise GammaOrderViolationError(p.gamma_g, p.gamma1, names=('gamma_g', 'gamma1'))
    return p
