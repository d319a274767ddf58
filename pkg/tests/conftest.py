import pytest

from artaxis.model.configuration_artaxis import ModelParams, validate_params

BASE_COEFFICIENTS = dict(chi=1.0, xi=1.0, beta=1.0, delta=1.0, alpha=1.0, gamma0=1.0, gamma1=1.0, k=0.5, l=0.5)

MINIMAL_CONFIG = """\
# unit square, regime (i)
model.chi = 1
model.xi = 1
model.beta = 1
model.delta = 1
model.alpha = 1
model.gamma0 = 1
model.gamma1 = 1
model.k = 0.4
model.l = 0.4
grid.dim = 2
grid.extent = 1, 1
grid.cells = 8, 8
"""


def params_of(dim=2, **kwargs):
    values = dict(BASE_COEFFICIENTS)
    values.update(kwargs)
    return validate_params(ModelParams(dim=dim, **values))


@pytest.fixture
def make_params():
    return params_of


@pytest.fixture
def minimal_config_text():
    return MINIMAL_CONFIG
