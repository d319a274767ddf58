"""Finite-volume operators with homogeneous Neumann boundaries.

Ghost cells copy their interior neighbour, so every boundary face carries zero
flux and the discrete operators conserve the integral to round-off.
"""
from functools import lru_cache
from typing import Tuple

import numpy as np
import scipy.sparse
from scipy.linalg import solve_banded
from scipy.fft import dctn, idctn
from scipy.sparse.linalg import cg, LinearOperator

from artaxis.grid.field import Grid, ScalarField, same_grid
from artaxis.util.constants import SOLVER_RTOL
from artaxis.util.errors import NoConvergenceError

FACE_AVERAGES = ('mean', 'upwind')


def laplacian_neumann(f: ScalarField) -> ScalarField:
    values = f.values
    result = np.zeros_like(values)
    for axis, h in enumerate(f.grid.spacing):
        padded = np.pad(values, [(1, 1) if a == axis else (0, 0) for a in range(values.ndim)], mode='edge')
        lower = np.take(padded, np.arange(0, values.shape[axis]), axis=axis)
        upper = np.take(padded, np.arange(2, values.shape[axis] + 2), axis=axis)
        result += (lower - 2.0 * values + upper) / (h * h)
    return f.with_values(result)


def face_slices(ndim, axis):
    left = [slice(None)] * ndim
    right = [slice(None)] * ndim
    left[axis] = slice(None, -1)
    right[axis] = slice(1, None)
    return tuple(left), tuple(right)


def taxis_divergence(u: ScalarField, phi: ScalarField, coeff: float, face_average: str = 'mean') -> ScalarField:
    """coeff · ∇·(u ∇φ) from face fluxes u_face (φ_{i+1} − φ_i)/h."""
    assert face_average in FACE_AVERAGES, \
        f'Invalid face average, expected one from `{FACE_AVERAGES}`, but got `{face_average}`'
    grid = same_grid(u, phi)
    ndim = u.values.ndim
    result = np.zeros_like(u.values)
    for axis, h in enumerate(grid.spacing):
        left, right = face_slices(ndim, axis)
        gradient = (phi.values[right] - phi.values[left]) / h
        if face_average == 'mean':
            u_face = 0.5 * (u.values[left] + u.values[right])
        else:
            # transport velocity of u_t = coeff ∇·(u∇φ) is −coeff ∇φ
            u_face = np.where(-coeff * gradient > 0, u.values[left], u.values[right])
        flux = u_face * gradient
        padded = np.pad(flux, [(1, 1) if a == axis else (0, 0) for a in range(ndim)])
        lo, hi = face_slices(ndim, axis)
        result += (padded[hi] - padded[lo]) / h
    return u.with_values(coeff * result)


def _axis_laplacian(n, h):
    main = np.full(n, -2.0)
    main[0] = main[-1] = -1.0
    off = np.ones(n - 1)
    return scipy.sparse.diags([off, main, off], offsets=[-1, 0, 1], format='csr') / (h * h)


@lru_cache(maxsize=16)
def neumann_laplacian_matrix(grid: Grid) -> scipy.sparse.csr_matrix:
    """Sparse Neumann Laplacian acting on C-ordered flattened values."""
    if grid.dim == 1:
        return _axis_laplacian(grid.cells[0], grid.spacing[0])
    nx, ny = grid.cells
    hx, hy = grid.spacing
    return (scipy.sparse.kron(_axis_laplacian(nx, hx), scipy.sparse.identity(ny))
            + scipy.sparse.kron(scipy.sparse.identity(nx), _axis_laplacian(ny, hy))).tocsr()


def laplacian_eigenvalues(grid: Grid) -> np.ndarray:
    """Eigenvalues of −Δ_h in the DCT-II basis, shaped like the grid."""
    axes = []
    for n, h in zip(grid.cells, grid.spacing):
        axes.append(4.0 / (h * h) * np.sin(np.pi * np.arange(n) / (2.0 * n)) ** 2)
    if grid.dim == 1:
        return axes[0]
    return axes[0][:, None] + axes[1][None, :]


@lru_cache(maxsize=16)
def _implicit_banded(grid: Grid, dt: float, decay: float):
    n = grid.cells[0]
    r = dt / grid.spacing[0] ** 2
    ab = np.zeros((3, n))
    ab[0, 1:] = -r
    ab[1, :] = 1.0 + dt * decay + 2.0 * r
    ab[1, 0] = ab[1, -1] = 1.0 + dt * decay + r
    ab[2, :-1] = -r
    return ab


@lru_cache(maxsize=16)
def _implicit_system(grid: Grid, dt: float, decay: float) -> Tuple[LinearOperator, LinearOperator]:
    """(operator, preconditioner) of the 2D solve; the cosine basis diagonalises the operator exactly."""
    n = grid.n_cells
    scale = 1.0 + dt * decay
    laplacian = neumann_laplacian_matrix(grid)
    symbol = scale + dt * laplacian_eigenvalues(grid)

    def matvec(x):
        return scale * x - dt * (laplacian @ x)

    def inverse(b):
        b_hat = dctn(np.reshape(b, grid.shape), type=2, norm='ortho')
        return idctn(b_hat / symbol, type=2, norm='ortho').ravel()

    return (LinearOperator((n, n), matvec=matvec, dtype=float),
            LinearOperator((n, n), matvec=inverse, dtype=float))


def implicit_operator(f: ScalarField, dt: float, decay: float) -> ScalarField:
    """(1 + dt·decay)·x − dt·Δx, the system solved by `solve_implicit_diffusion`."""
    return f.with_values((1.0 + dt * decay) * f.values - dt * laplacian_neumann(f).values)


def solve_implicit_diffusion(rhs: ScalarField, dt: float, decay: float) -> ScalarField:
    assert dt > 0, f'expect dt > 0, but got {dt}'
    assert decay >= 0, f'expect decay >= 0, but got {decay}'
    grid = rhs.grid
    b = rhs.flat()
    scale = 1.0 + dt * decay
    b_norm = np.linalg.norm(b)
    if b_norm == 0.0:
        return ScalarField.zeros(grid)

    if grid.dim == 1:
        x = solve_banded((1, 1), _implicit_banded(grid, dt, decay), b)
    else:
        operator, preconditioner = _implicit_system(grid, dt, decay)
        maxiter = 10 * grid.n_cells
        # the spectral guess usually meets the residual before the first iteration
        x, info = cg(operator, b, x0=preconditioner.matvec(b), rtol=SOLVER_RTOL, atol=0.0,
                     maxiter=maxiter, M=preconditioner)
        if info < 0:
            raise NoConvergenceError(f'conjugate gradient breakdown (info={info})')
        if info > 0:
            residual = np.linalg.norm(b - operator.matvec(x)) / b_norm
            raise NoConvergenceError(
                f'conjugate gradient stopped at relative residual {residual:.3e} after {maxiter} iterations')

    # constants are eigenvectors with eigenvalue `scale`: match the mean exactly
    x = x + (b.sum() / scale - x.sum()) / x.size
    return rhs.with_values(x)
