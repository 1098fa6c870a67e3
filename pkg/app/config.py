import logging
import os
from typing import Any, Mapping, Optional

from dotenv import dotenv_values, load_dotenv
from typing_extensions import TypedDict

from app.engine.params import get_default_params
from app.utils import ValidityCapError

logger = logging.getLogger(__name__)

GRID_ENV_VAR = 'LIOUVILLE_GRID_N'
SPEED_COMMANDS = frozenset({'shape'})


class RunConfig(TypedDict):
    R: float
    beta: float
    A: float
    A_max: float
    steps: int
    N: int
    V: float
    samples: int
    l_max: int
    n_max: int
    out: Optional[str]
    svg: Optional[str]
    baseline: Optional[str]


_FIELD_TYPES: dict[str, type] = {
    'R': float,
    'beta': float,
    'A': float,
    'A_max': float,
    'steps': int,
    'N': int,
    'V': float,
    'samples': int,
    'l_max': int,
    'n_max': int,
    'out': str,
    'svg': str,
    'baseline': str,
}
_KEY_ALIASES = {key.lower(): key for key in _FIELD_TYPES}


def get_default_run_config() -> RunConfig:
    params = get_default_params()
    return RunConfig(
        R=4.0,
        beta=params['beta_default'],
        A=1.0,
        A_max=6.0,
        steps=64,
        N=params['grid_n'],
        V=0.22,
        samples=720,
        l_max=6,
        n_max=4,
        out=None,
        svg=None,
        baseline=None,
    )


def coerce_overrides(raw: Mapping[str, Any], source: str) -> dict[str, Any]:
    """Map raw key/value pairs onto RunConfig fields with their types."""
    overrides: dict[str, Any] = {}
    for key, value in raw.items():
        if value is None:
            continue
        name = _KEY_ALIASES.get(key.strip().lower().replace('-', '_'))
        if name is None:
            logger.warning("%s: ignoring unknown setting '%s'", source, key)
            continue
        cast = _FIELD_TYPES[name]
        try:
            if cast is int and isinstance(value, str):
                as_float = float(value)
                if not as_float.is_integer():
                    raise ValueError(value)
                overrides[name] = int(as_float)
            else:
                overrides[name] = cast(value)
        except (TypeError, ValueError):
            raise ValueError(f"{source}: setting '{key}' expects {cast.__name__}, got {value!r}")
    return overrides


def load_env() -> dict[str, Any]:
    # a local .env file may set the grid size as well
    load_dotenv()
    value = os.getenv(GRID_ENV_VAR)
    if value is None or not value.strip():
        return {}
    return coerce_overrides({'N': value}, GRID_ENV_VAR)


def load_config_file(path: str) -> dict[str, Any]:
    if not os.path.isfile(path):
        raise ValueError(f"config file not found: {path}")
    return coerce_overrides(dotenv_values(path), path)


def merge_run_config(*layers: Mapping[str, Any]) -> RunConfig:
    """Defaults, then each layer in order; later layers win."""
    config: dict[str, Any] = dict(get_default_run_config())
    for layer in layers:
        config.update({k: v for k, v in layer.items() if v is not None})
    return RunConfig(**config)


def validate_run_config(config: RunConfig, command: Optional[str] = None) -> None:
    """Range checks; the speed cap applies only to commands that draw a shape."""
    params = get_default_params()
    if not config['R'] > 0:
        raise ValueError("R must be >0")
    if not config['beta'] > 0:
        raise ValueError("beta must be >0")
    if not (0 <= config['A'] <= params['a_max']):
        raise ValueError(f"A must be in [0, {params['a_max']:g}]")
    if not (0 < config['A_max'] <= params['a_max']):
        raise ValueError(f"A_max must be in (0, {params['a_max']:g}]")
    if config['steps'] < 32:
        raise ValueError("steps must be >= 32")
    if config['N'] < 64 or config['N'] % 2:
        raise ValueError("N must be an even integer >= 64")
    if command in SPEED_COMMANDS and abs(config['V']) > params['v_cap']:
        raise ValidityCapError(f"validity cap: |V|={abs(config['V']):g} exceeds {params['v_cap']:g}")
    if config['samples'] < 8:
        raise ValueError("samples must be >= 8")
    if config['l_max'] < 2:
        raise ValueError("l_max must be >= 2")
    if config['n_max'] < 0:
        raise ValueError("n_max must be >= 0")
    if config['l_max'] > config['N'] // 4:
        raise ValueError("l_max must not exceed N/4")
