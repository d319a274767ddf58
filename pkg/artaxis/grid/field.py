from dataclasses import dataclass, field
from typing import Callable, Tuple

import numpy as np

from artaxis.util.constants import NEGATIVE_TOLERANCE
from artaxis.util.errors import GridMismatchError, NegativeValueError


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centred mesh of the box [0, L_1] × … × [0, L_dim]."""
    dim: int
    extent: Tuple[float, ...]
    cells: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'extent', tuple(float(x) for x in self.extent))
        object.__setattr__(self, 'cells', tuple(int(n) for n in self.cells))
        assert self.dim in (1, 2), f'expect dim in (1, 2), but got {self.dim}'
        assert len(self.extent) == self.dim and len(self.cells) == self.dim, \
            f'expect {self.dim} extents and cell counts, but got {self.extent} and {self.cells}'
        assert all(x > 0 for x in self.extent), f'expect positive extents, but got {self.extent}'
        assert all(n >= 3 for n in self.cells), f'expect at least 3 cells per axis, but got {self.cells}'

    @classmethod
    def unit(cls, dim: int, n: int) -> 'Grid':
        return cls(dim=dim, extent=(1.0,) * dim, cells=(n,) * dim)

    @property
    def spacing(self) -> Tuple[float, ...]:
        return tuple(length / n for length, n in zip(self.extent, self.cells))

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.cells

    @property
    def n_cells(self) -> int:
        return int(np.prod(self.cells))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def measure(self) -> float:
        return float(np.prod(self.extent))

    def axis_centers(self, axis: int) -> np.ndarray:
        h = self.spacing[axis]
        return (np.arange(self.cells[axis]) + 0.5) * h

    def centers(self) -> Tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*(self.axis_centers(i) for i in range(self.dim)), indexing='ij'))


@dataclass(frozen=True, eq=False)
class ScalarField:
    """One value per cell; `values` has shape `grid.shape` (axis i ↔ coordinate i)."""
    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.size != self.grid.n_cells:
            raise GridMismatchError(f'expect {self.grid.n_cells} values, but got {values.size}')
        object.__setattr__(self, 'values', values.reshape(self.grid.shape))

    @classmethod
    def constant(cls, grid: Grid, c: float) -> 'ScalarField':
        return cls(grid, np.full(grid.shape, float(c)))

    @classmethod
    def zeros(cls, grid: Grid) -> 'ScalarField':
        return cls.constant(grid, 0.0)

    @classmethod
    def from_function(cls, grid: Grid, fn: Callable[..., np.ndarray]) -> 'ScalarField':
        values = np.broadcast_to(np.asarray(fn(*grid.centers()), dtype=float), grid.shape)
        return cls(grid, np.array(values))

    def with_values(self, values) -> 'ScalarField':
        return ScalarField(self.grid, values)

    def flat(self) -> np.ndarray:
        return self.values.ravel()

    def min(self) -> float:
        return float(self.values.min())


def same_grid(*fields_):
    grid = fields_[0].grid
    for f in fields_[1:]:
        if f.grid != grid:
            raise GridMismatchError(f'fields live on different grids: {grid} vs {f.grid}')
    return grid


def integral(f: ScalarField) -> float:
    return float(np.sum(f.values) * f.grid.cell_volume)


def lp_integral(f: ScalarField, p: float) -> float:
    assert p >= 1, f'expect p >= 1, but got {p}'
    lowest = f.min()
    if lowest < -NEGATIVE_TOLERANCE:
        raise NegativeValueError(f'lp_integral needs a nonnegative field, but min is {lowest:.3e}')
    return float(np.sum(np.power(np.maximum(f.values, 0.0), p)) * f.grid.cell_volume)


def linf_norm(f: ScalarField) -> float:
    return float(np.max(np.abs(f.values)))
