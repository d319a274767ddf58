import os

import numpy as np
import pandas

from artaxis.grid.field import Grid, ScalarField
from artaxis.util.errors import GridMismatchError
from artaxis.util.utils import comment_header

PGM_MAX = 65535
COORDINATES = ('x', 'y')


def field_frame(f: ScalarField) -> pandas.DataFrame:
    centers = f.grid.centers()
    columns = {COORDINATES[i]: centers[i].ravel() for i in range(f.grid.dim)}
    columns['value'] = f.flat()
    return pandas.DataFrame(columns)


def write_table(path, frame: pandas.DataFrame, header=()):
    """CSV preceded by the comment header, with unix line endings."""
    with open(path, 'w', encoding='utf-8', newline='') as fp:
        fp.write(comment_header(header))
        frame.to_csv(fp, index=False, lineterminator='\n')


def write_field_csv(path, f: ScalarField, header=()):
    write_table(path, field_frame(f), header)


def read_field_csv(path, grid: Grid) -> ScalarField:
    frame = pandas.read_csv(path, comment='#')
    coordinates = list(COORDINATES[:grid.dim])
    missing = [c for c in coordinates + ['value'] if c not in frame.columns]
    if missing:
        raise GridMismatchError(f'field file {path} misses columns {missing}')
    frame = frame.sort_values(coordinates, kind='stable')
    return ScalarField(grid, frame['value'].to_numpy(dtype=float))


def write_field_pgm(path, f: ScalarField, header=()):
    """Plain (P2) graymap, values rescaled to 0..65535; `<path>.scale` keeps the min and max of the rescaling."""
    values = f.values if f.grid.dim == 2 else f.values[:, None]
    lo, hi = float(values.min()), float(values.max())
    span = hi - lo
    levels = np.zeros(values.shape, dtype=np.int64) if span == 0 else \
        np.rint((values - lo) / span * PGM_MAX).astype(np.int64)
    # image rows run along y, columns along x
    image = levels.T
    height, width = image.shape
    with open(path, 'w', encoding='utf-8', newline='\n') as fp:
        fp.write('P2\n')
        fp.write(comment_header(header))
        fp.write(f'{width} {height}\n{PGM_MAX}\n')
        for row in image:
            fp.write(' '.join(str(level) for level in row) + '\n')
    with open(os.fspath(path) + '.scale', 'w', encoding='utf-8', newline='\n') as fp:
        fp.write(comment_header(header))
        fp.write(f'min = {lo!r}\nmax = {hi!r}\n')
    return lo, hi
