from .configuration_artaxis import ModelParams, validate_params
from .production import ProductionKind, ProductionLaw, AttractionProduction, RepulsionProduction, eval_production
from .criteria import Regime, RegimeReport, classify_regime
