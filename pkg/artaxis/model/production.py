from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum

import numpy as np

from artaxis.util.errors import DomainError
from artaxis.util.utils import within_ulps


class ProductionKind(str, Enum):
    ATTRACTION_F = 'AttractionF'
    REPULSION_G = 'RepulsionG'


@dataclass(frozen=True)
class ProductionLaw(ABC):
    """Power-law production feeding one of the chemical equations."""
    coefficient: float
    exponent: float
    kind = None

    def __post_init__(self):
        assert self.coefficient > 0 and self.exponent > 0, \
            f'expect positive coefficient and exponent, but got {self.coefficient} and {self.exponent}'

    @abstractmethod
    def _evaluate(self, s: np.ndarray) -> np.ndarray:
        pass

    def __call__(self, s):
        values = self._evaluate(np.asarray(s, dtype=float))
        return values if np.ndim(values) else float(values)


@dataclass(frozen=True)
class AttractionProduction(ProductionLaw):
    kind = ProductionKind.ATTRACTION_F

    def _evaluate(self, s):
        # 0**k = 0 for k > 0, the continuous extension at the origin
        return self.coefficient * np.power(np.maximum(s, 0.0), self.exponent)


@dataclass(frozen=True)
class RepulsionProduction(ProductionLaw):
    kind = ProductionKind.REPULSION_G

    def _evaluate(self, s):
        return self.coefficient * np.power(1.0 + np.maximum(s, 0.0), self.exponent)


def eval_production(law: ProductionLaw, s: float) -> float:
    if not s >= 0:
        raise DomainError(f'production laws are defined for s >= 0, but got s={s!r}')
    return float(law(s))


def check_envelope(law: ProductionLaw, params, s: float, ulps: int = 4) -> bool:
    """Whether `law` respects the hypothesis envelope of `params` at s."""
    value = eval_production(law, s)
    if law.kind is ProductionKind.ATTRACTION_F:
        return value >= 0 and within_ulps(value, params.alpha * s ** params.k, ulps)
    lower = params.gamma0 * (1.0 + s) ** params.l
    upper = params.gamma1 * (1.0 + s) ** params.l
    return within_ulps(lower, value, ulps) and within_ulps(value, upper, ulps)
