from .field import Grid, ScalarField, integral, lp_integral, linf_norm
from .operators import laplacian_neumann, taxis_divergence, solve_implicit_diffusion
