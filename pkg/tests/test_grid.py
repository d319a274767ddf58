import numpy as np
import pytest
import scipy.sparse
import scipy.sparse.linalg
from scipy.fft import idctn

from artaxis import __version__
from artaxis.grid.field import Grid, ScalarField, integral, lp_integral, linf_norm
from artaxis.grid.operators import laplacian_neumann, taxis_divergence, solve_implicit_diffusion, \
    neumann_laplacian_matrix, laplacian_eigenvalues, implicit_operator
from artaxis.grid.snapshot import write_field_csv, read_field_csv, write_field_pgm
from artaxis.util.errors import GridMismatchError, NegativeValueError

GRIDS = [Grid.unit(1, 24), Grid(dim=2, extent=(1.0, 2.0), cells=(12, 9))]


def _random_field(grid, seed=0, low=0.0, high=1.0):
    return ScalarField(grid, np.random.default_rng(seed).uniform(low, high, grid.shape))


def test_grid_geometry():
    grid = Grid(dim=2, extent=(2.0, 1.0), cells=(4, 5))
    assert grid.spacing == (0.5, 0.2)
    assert grid.cell_volume == pytest.approx(0.1)
    assert grid.measure == pytest.approx(2.0)
    x, y = grid.centers()
    assert x.shape == (4, 5)
    assert x[0, 0] == pytest.approx(0.25) and y[0, 0] == pytest.approx(0.1)


def test_grid_rejects_tiny_axes():
    with pytest.raises(AssertionError):
        Grid.unit(2, 2)


def test_integral_and_norms():
    grid = Grid(dim=2, extent=(2.0, 3.0), cells=(5, 7))
    f = ScalarField.constant(grid, 2.0)
    assert integral(f) == pytest.approx(12.0, rel=1e-14)
    assert lp_integral(f, 3.0) == pytest.approx(48.0, rel=1e-14)
    assert linf_norm(f.with_values(-3.0 * f.values)) == 6.0


def test_lp_integral_rejects_negative_values():
    f = ScalarField(Grid.unit(1, 4), [1.0, -1e-3, 0.0, 2.0])
    with pytest.raises(NegativeValueError):
        lp_integral(f, 2.0)
    assert lp_integral(f.with_values([1.0, -1e-14, 0.0, 2.0]), 2.0) == pytest.approx(5.0 / 4.0)


def test_field_size_mismatch():
    with pytest.raises(GridMismatchError):
        ScalarField(Grid.unit(2, 4), np.zeros(15))
    with pytest.raises(GridMismatchError):
        laplacian_neumann(ScalarField.zeros(Grid.unit(1, 4))).with_values(np.zeros(5))


@pytest.mark.parametrize('grid', GRIDS)
def test_laplacian_annihilates_constants(grid):
    np.testing.assert_allclose(laplacian_neumann(ScalarField.constant(grid, 3.7)).values, 0.0, atol=1e-10)


@pytest.mark.parametrize('grid', GRIDS)
def test_laplacian_conserves_integral(grid):
    f = _random_field(grid)
    assert abs(integral(laplacian_neumann(f))) <= 1e-10 * np.abs(laplacian_neumann(f).values).max()


@pytest.mark.parametrize('grid', GRIDS)
def test_sparse_matrix_matches_stencil_and_is_symmetric(grid):
    matrix = neumann_laplacian_matrix(grid)
    f = _random_field(grid, seed=3)
    np.testing.assert_allclose(matrix @ f.flat(), laplacian_neumann(f).flat(), rtol=1e-12, atol=1e-9)
    assert abs(matrix - matrix.T).max() == 0


@pytest.mark.parametrize('grid', GRIDS)
def test_cosine_modes_are_eigenvectors(grid):
    eigenvalues = laplacian_eigenvalues(grid)
    index = (2,) if grid.dim == 1 else (2, 3)
    coefficients = np.zeros(grid.shape)
    coefficients[index] = 1.0
    mode = ScalarField(grid, idctn(coefficients, type=2, norm='ortho'))
    np.testing.assert_allclose(-laplacian_neumann(mode).values, eigenvalues[index] * mode.values, atol=1e-9)


def test_second_order_on_smooth_field():
    errors = []
    for n in (16, 32, 64):
        grid = Grid.unit(2, n)
        f = ScalarField.from_function(grid, lambda x, y: np.cos(np.pi * x) * np.cos(2 * np.pi * y))
        exact = -5.0 * np.pi ** 2 * f.values
        errors.append(np.abs(laplacian_neumann(f).values - exact).max())
    assert np.log2(errors[0] / errors[1]) > 1.8
    assert np.log2(errors[1] / errors[2]) > 1.8


@pytest.mark.parametrize('grid', GRIDS)
@pytest.mark.parametrize('face_average', ['mean', 'upwind'])
def test_taxis_divergence_conserves_mass(grid, face_average):
    u = _random_field(grid, seed=1)
    phi = _random_field(grid, seed=2, low=-1.0, high=1.0)
    div = taxis_divergence(u, phi, 2.5, face_average)
    assert abs(integral(div)) <= 1e-12 * np.abs(div.values).max() * grid.n_cells


def test_taxis_divergence_vanishes_for_flat_potential():
    grid = GRIDS[1]
    div = taxis_divergence(_random_field(grid), ScalarField.constant(grid, 4.0), 1.0)
    np.testing.assert_array_equal(div.values, 0.0)


def test_taxis_divergence_rejects_unknown_average():
    grid = GRIDS[0]
    with pytest.raises(AssertionError):
        taxis_divergence(_random_field(grid), _random_field(grid), 1.0, 'central')


@pytest.mark.parametrize('grid', GRIDS + [Grid.unit(2, 32)])
@pytest.mark.parametrize('decay', [0.0, 0.7])
def test_implicit_solve_inverts_operator(grid, decay):
    rhs = _random_field(grid, seed=5)
    dt = 3e-3
    x = solve_implicit_diffusion(rhs, dt, decay)
    np.testing.assert_allclose(implicit_operator(x, dt, decay).values, rhs.values, rtol=1e-9, atol=1e-9)
    assert integral(x) * (1.0 + dt * decay) == pytest.approx(integral(rhs), rel=1e-13)


def test_implicit_solve_of_zero_is_zero():
    grid = GRIDS[1]
    np.testing.assert_array_equal(solve_implicit_diffusion(ScalarField.zeros(grid), 0.1, 1.0).values, 0.0)


def test_field_csv_round_trip(tmp_path):
    grid = GRIDS[1]
    f = _random_field(grid, seed=9)
    path = tmp_path / 'u.csv'
    write_field_csv(path, f, [('t', '0.0')])
    text = path.read_text(encoding='utf-8')
    assert text.startswith('# artaxis 1.0.0\n# t = 0.0\nx,y,value\n')
    np.testing.assert_allclose(read_field_csv(path, grid).values, f.values, rtol=1e-15)


def test_pgm_snapshot(tmp_path):
    grid = Grid(dim=2, extent=(1.0, 1.0), cells=(4, 3))
    f = ScalarField(grid, np.arange(12.0))
    path = tmp_path / 'u.pgm'
    lo, hi = write_field_pgm(path, f)
    lines = path.read_text(encoding='utf-8').splitlines()
    assert lines[0] == 'P2'
    body = [line for line in lines[1:] if not line.startswith('#')]
    assert body[0] == '4 3'
    assert body[1] == '65535'
    assert len(body) == 2 + 3
    assert body[2].split()[0] == '0'
    assert (lo, hi) == (0.0, 11.0)
    scale = (tmp_path / 'u.pgm.scale').read_text(encoding='utf-8').splitlines()
    assert scale[0] == f'# artaxis {__version__}'
    assert [line for line in scale if not line.startswith('#')] == ['min = 0.0', 'max = 11.0']


@pytest.mark.parametrize('grid', GRIDS)
@pytest.mark.parametrize('face_average', ['mean', 'upwind'])
def test_taxis_of_constant_density_is_scaled_laplacian(grid, face_average):
    rng = np.random.default_rng(31)
    for _ in range(20):
        c, coeff = rng.uniform(0.0, 5.0), rng.uniform(-3.0, 3.0)
        phi = _random_field(grid, seed=int(rng.integers(1 << 30)), low=-1.0, high=1.0)
        div = taxis_divergence(ScalarField.constant(grid, c), phi, coeff, face_average)
        expected = coeff * c * laplacian_neumann(phi).values
        np.testing.assert_allclose(div.values, expected, rtol=1e-12, atol=1e-12 * np.abs(expected).max())


@pytest.mark.parametrize('dt', [1e-6, 1e-3, 10.0])
def test_implicit_solve_matches_direct_solve(dt):
    grid = Grid(dim=2, extent=(1.0, 3.0), cells=(32, 20))
    rhs = _random_field(grid, seed=13)
    matrix = scipy.sparse.identity(grid.n_cells, format='csc') * (1.0 + dt * 0.4) \
        - dt * neumann_laplacian_matrix(grid).tocsc()
    expected = scipy.sparse.linalg.spsolve(matrix, rhs.flat())
    x = solve_implicit_diffusion(rhs, dt, 0.4)
    np.testing.assert_allclose(x.flat(), expected, rtol=1e-9, atol=1e-10 * np.abs(expected).max())
