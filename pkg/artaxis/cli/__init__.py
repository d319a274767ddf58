from .arguments import RunConfig, SweepSpec, SweepAxis
from .config import parse_config, load_config
