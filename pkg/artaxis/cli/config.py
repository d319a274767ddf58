"""Line-oriented configuration files.

    # comment
    section.key = value
    seed = 7

One assignment per line, at most one dot in a key, every key at most once.
"""
from typing import Dict, Tuple

from pydantic import ValidationError

from artaxis.cli.arguments import RunConfig
from artaxis.util.errors import ConfigSyntaxError, UnknownKeyError, ConfigValidationError

TOP_LEVEL_KEYS = ('seed',)


def tokenize(text: str) -> Dict[str, Tuple[str, int]]:
    """`key -> (raw value, line number)` for every assignment in `text`."""
    entries: Dict[str, Tuple[str, int]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigSyntaxError(f'expect `section.key = value`, but got `{raw.strip()}`', [number])
        if key.count('.') > 1 or key.startswith('.') or key.endswith('.') or ' ' in key:
            raise ConfigSyntaxError(f'invalid key `{key}`', [number])
        if not value:
            raise ConfigSyntaxError(f'missing value for `{key}`', [number])
        if key in entries:
            raise ConfigSyntaxError(f'duplicate key `{key}`', [entries[key][1], number])
        entries[key] = (value, number)
    return entries


def _nest(entries: Dict[str, Tuple[str, int]]) -> dict:
    data = {}
    for key, (value, _) in entries.items():
        section, dot, name = key.partition('.')
        if not dot:
            if key not in TOP_LEVEL_KEYS:
                raise UnknownKeyError(key)
            data[key] = value
            continue
        if section not in RunConfig.model_fields or section in TOP_LEVEL_KEYS:
            raise UnknownKeyError(key)
        section_model = RunConfig.model_fields[section].annotation
        if name not in section_model.model_fields:
            raise UnknownKeyError(key)
        data.setdefault(section, {})[name] = value
    return data


def parse_config(text: str) -> RunConfig:
    data = _nest(tokenize(text))
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        location = '.'.join(str(part) for part in error['loc'] if not isinstance(part, int)) or 'config'
        raise ConfigValidationError(location, error['msg']) from e
    # coefficient validation lives with the model
    config.params()
    return config


def load_config(path) -> RunConfig:
    with open(path, 'r', encoding='utf-8') as fp:
        return parse_config(fp.read())
