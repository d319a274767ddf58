from typing import List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from artaxis.grid.field import Grid
from artaxis.model.configuration_artaxis import ModelParams, POSITIVE_FIELDS, validate_params
from artaxis.util.constants import DEFAULT_CFL_SAFETY, DEFAULT_DT_MIN, DEFAULT_DT_MAX, DEFAULT_SAMPLE_STRIDE, \
    GRONWALL_FACTOR, DEFAULT_C_REG, DEFAULT_EPSILON, DEFAULT_FOURIER_MODES
from artaxis.util.errors import ConfigValidationError, UnknownKeyError

SWEEPABLE_FIELDS = POSITIVE_FIELDS + ('gamma_g',)
SPACINGS = ('linear', 'log')


def _split_tuple(value):
    if isinstance(value, str):
        return tuple(part.strip() for part in value.split(',') if part.strip())
    return value


class Section(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)


class ModelSection(Section):
    chi: float
    xi: float
    beta: float
    delta: float
    alpha: float
    gamma0: float
    gamma1: float
    k: float
    l: float
    gamma_g: Optional[float] = None


class GridSection(Section):
    dim: int = Field(ge=1, le=2)
    extent: Tuple[float, ...]
    cells: Tuple[int, ...]
    face_average: Literal['mean', 'upwind'] = 'mean'

    @field_validator('extent', 'cells', mode='before')
    @classmethod
    def split_axes(cls, value):
        return _split_tuple(value)

    @model_validator(mode='after')
    def check_shape(self):
        if len(self.extent) != self.dim or len(self.cells) != self.dim:
            raise ValueError(f'expect {self.dim} extents and cell counts, but got {self.extent} and {self.cells}')
        if any(x <= 0 for x in self.extent):
            raise ValueError(f'expect positive extents, but got {self.extent}')
        if any(n < 3 for n in self.cells):
            raise ValueError(f'expect at least 3 cells per axis, but got {self.cells}')
        return self


class InitSection(Section):
    kind: Literal['homogeneous', 'gaussian', 'file'] = 'homogeneous'
    c: float = Field(default=1.0, ge=0)
    center: Optional[Tuple[float, ...]] = None  # None: domain centre
    width: float = Field(default=0.1, gt=0)
    amplitude: float = Field(default=1.0, ge=0)
    background: float = Field(default=0.0, ge=0)
    mass: Optional[float] = Field(default=None, gt=0)
    path: Optional[str] = None

    @field_validator('center', mode='before')
    @classmethod
    def split_center(cls, value):
        return _split_tuple(value)

    @model_validator(mode='after')
    def check_path(self):
        if self.kind == 'file' and not self.path:
            raise ValueError('init.kind = file needs init.path')
        return self


class TimeSection(Section):
    horizon: float = Field(default=1.0, gt=0)
    dt_min: float = Field(default=DEFAULT_DT_MIN, gt=0)
    dt_max: float = Field(default=DEFAULT_DT_MAX, gt=0)
    cfl_safety: float = Field(default=DEFAULT_CFL_SAFETY, gt=0, le=1)

    @model_validator(mode='after')
    def check_bounds(self):
        if self.dt_min > self.dt_max:
            raise ValueError(f'expect dt_min <= dt_max, but got {self.dt_min} > {self.dt_max}')
        return self


class MonitorSection(Section):
    p: Union[Literal['pbar'], float] = 'pbar'
    blowup_threshold: Union[Literal['auto'], float] = 'auto'
    sample_stride: int = Field(default=DEFAULT_SAMPLE_STRIDE, ge=1)
    gronwall_factor: float = Field(default=GRONWALL_FACTOR, gt=0)

    @field_validator('p')
    @classmethod
    def check_p(cls, value):
        if value != 'pbar' and value < 1:
            raise ValueError(f'expect p >= 1, but got {value}')
        return value

    @field_validator('blowup_threshold')
    @classmethod
    def check_threshold(cls, value):
        if value != 'auto' and value <= 0:
            raise ValueError(f'expect a positive threshold, but got {value}')
        return value


class OutputSection(Section):
    directory: str = 'out'
    snapshot_every: int = Field(default=0, ge=0)


class CriteriaSection(Section):
    c_reg: float = Field(default=DEFAULT_C_REG, gt=0)
    epsilon: float = Field(default=DEFAULT_EPSILON, gt=0)


class EstimateSection(Section):
    rho: Optional[float] = Field(default=None, gt=0)  # None: model.delta
    q: Optional[float] = None  # None: (p̄ + l)/l
    samples: int = 16
    horizon: float = Field(default=1.0, gt=0)
    modes: int = Field(default=DEFAULT_FOURIER_MODES, ge=1)


class SweepSection(Section):
    axis1: Optional[str] = None
    axis2: Optional[str] = None
    workers: int = Field(default=1, ge=1)


class RunConfig(Section):
    model: ModelSection
    grid: GridSection
    init: InitSection = InitSection()
    time: TimeSection = TimeSection()
    monitor: MonitorSection = MonitorSection()
    output: OutputSection = OutputSection()
    criteria: CriteriaSection = CriteriaSection()
    estimate: EstimateSection = EstimateSection()
    sweep: SweepSection = SweepSection()
    seed: int = 0

    def params(self) -> ModelParams:
        return validate_params(ModelParams(dim=self.grid.dim, **self.model.model_dump()))

    def make_grid(self) -> Grid:
        return Grid(dim=self.grid.dim, extent=self.grid.extent, cells=self.grid.cells)

    def with_updates(self, **kwargs) -> 'RunConfig':
        """Copy with top-level or `section.key` overrides, e.g. `{'model.k': 0.3}`."""
        data = self.model_dump()
        for key, value in kwargs.items():
            section, _, name = key.rpartition('.')
            if section:
                data[section][name] = value
            else:
                data[name] = value
        return RunConfig.model_validate(data)

    def resolved_items(self, exclude=()) -> List[Tuple[str, str]]:
        """Flattened `section.key` / value pairs of the full configuration."""
        items = []
        for section, values in self.model_dump().items():
            if not isinstance(values, dict):
                items.append((section, _format_value(values)))
                continue
            for name, value in values.items():
                key = f'{section}.{name}'
                if key not in exclude:
                    items.append((key, _format_value(value)))
        return items


def _format_value(value):
    if value is None:
        return 'none'
    if isinstance(value, (tuple, list)):
        return ', '.join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


class SweepAxis(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    lo: float
    hi: float
    count: int = Field(ge=2)
    spacing: Literal['linear', 'log'] = 'linear'

    @classmethod
    def parse(cls, text: str) -> 'SweepAxis':
        """`name:min:max:count[:linear|log]`"""
        parts = [part.strip() for part in text.split(':')]
        if len(parts) not in (4, 5):
            raise ConfigValidationError('sweep.axis', f'expect `name:min:max:count[:linear|log]`, but got `{text}`')
        if parts[0] not in SWEEPABLE_FIELDS:
            raise UnknownKeyError(f'model.{parts[0]}')
        try:
            return cls(name=parts[0], lo=float(parts[1]), hi=float(parts[2]), count=int(parts[3]),
                       spacing=parts[4] if len(parts) == 5 else 'linear')
        except ValueError as e:
            raise ConfigValidationError('sweep.axis', str(e)) from e

    @model_validator(mode='after')
    def check_range(self):
        if self.spacing == 'log' and (self.lo <= 0 or self.hi <= 0):
            raise ValueError(f'log spacing needs positive bounds, but got {self.lo}, {self.hi}')
        return self

    def values(self) -> np.ndarray:
        if self.spacing == 'log':
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)


class SweepSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    base: RunConfig
    axes: Tuple[SweepAxis, ...] = Field(min_length=1, max_length=2)
    workers: int = Field(default=1, ge=1)

    @classmethod
    def from_config(cls, config: RunConfig, workers: Optional[int] = None) -> 'SweepSpec':
        texts = [text for text in (config.sweep.axis1, config.sweep.axis2) if text]
        if not texts:
            raise ConfigValidationError('sweep.axis1', 'a sweep needs at least one axis')
        axes = tuple(SweepAxis.parse(text) for text in texts)
        if len(axes) == 2 and axes[0].name == axes[1].name:
            raise ConfigValidationError('sweep.axis2', f'axis `{axes[0].name}` is swept twice')
        return cls(base=config, axes=axes, workers=workers if workers is not None else config.sweep.workers)

    def points(self) -> List[Tuple[float, ...]]:
        grids = np.meshgrid(*(axis.values() for axis in self.axes), indexing='ij')
        return [tuple(float(g[index]) for g in grids) for index in np.ndindex(grids[0].shape)]
