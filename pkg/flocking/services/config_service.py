"""
Scenario documents.

A scenario is a flat ``key = value`` text document: one pair per line, ``#``
starts a comment, blank lines are ignored and values may be quoted. Keys
left out take the defaults in ``flocking.utils.constants``. Command-line
overrides are merged over the document before anything is cast.
"""

import logging
import math
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from decouple import Choices, Csv

from ..exceptions import ConfigError
from ..utils.constants import (
    FeedbackDefaults, InitialConditionDefaults, IntegrationDefaults, Modes, ValidationMessages,
)
from .geometry import AgentState, SwarmParams
from .sensing import NoiseParams
from .simulation import InitSpec, SimConfig

logger = logging.getLogger(__name__)


def _float(value: str) -> float:
    text = value.strip().lower()
    if text in ('pi', '+pi'):
        return math.pi
    if text == '-pi':
        return -math.pi
    number = float(text)
    if not math.isfinite(number):
        raise ValueError(f"{value!r} is not finite")
    return number


def _int(value: str) -> int:
    return int(value.strip())


def _agent_entry(entry: str) -> AgentState:
    fields = Csv(cast=_float, delimiter=' \t')(entry)
    if len(fields) not in (4, 5):
        raise ValueError(f"expected 'x y v theta [omega]', got {entry!r}")
    return AgentState(*fields)


def _agents(value: str) -> Tuple[AgentState, ...]:
    return tuple(_agent_entry(entry) for entry in Csv()(value) if entry)


# key -> (cast, expected-type label)
SCALAR_KEYS: Dict[str, Tuple[Callable[[str], object], str]] = {
    'n_agents': (_int, 'integer'),
    'seed': (_int, 'integer'),
    'mode': (Choices(Modes.SIMULATION_MODES), f"one of {Modes.SIMULATION_MODES}"),
    'heading_mode': (Choices(Modes.HEADING_MODES), f"one of {Modes.HEADING_MODES}"),
    'alpha_rate': (Choices(Modes.ALPHA_RATE_MODES), f"one of {Modes.ALPHA_RATE_MODES}"),
    'agents': (_agents, "comma-separated 'x y v theta [omega]' entries"),
}
FLOAT_KEYS = [
    'dt', 't_max',
    'H', 'k', 'beta', 'L', 'L_e', 'alpha_min', 'Gamma', 'v_floor', 'sigma',
    'sigma_q', 'sigma_a',
    'x_min', 'x_max', 'y_min', 'y_max', 'speed_min', 'speed_max',
    'heading_min', 'heading_max', 'min_spacing',
]
SCALAR_KEYS.update({key: (_float, 'finite number') for key in FLOAT_KEYS})

KNOWN_KEYS = frozenset(SCALAR_KEYS)


def _unquote(value: str) -> str:
    value = value.strip()
    if len(value) >= 2 and value[0] == value[-1] and value[0] in ('"', "'"):
        return value[1:-1]
    return value


def parse_document(text: str) -> Dict[str, str]:
    """
    Raw key/value mapping of a scenario document.

    Raises:
        ConfigError: on a line without ``=`` or an unknown key
    """
    raw: Dict[str, str] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        content = line.split('#', 1)[0].strip()
        if not content:
            continue
        if '=' not in content:
            raise ConfigError(ValidationMessages.MALFORMED_LINE.format(line_no=line_no, line=line))
        key, value = content.split('=', 1)
        key = key.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(ValidationMessages.UNKNOWN_KEY.format(key=key))
        raw[key] = _unquote(value)
    return raw


def parse_overrides(overrides: Optional[Iterable[str]]) -> Dict[str, str]:
    """
    ``key=value`` strings from the command line as a mapping.

    Raises:
        ConfigError: on a malformed override or an unknown key
    """
    parsed: Dict[str, str] = {}
    for override in overrides or []:
        if '=' not in override:
            raise ConfigError(ValidationMessages.MALFORMED_OVERRIDE.format(override=override))
        key, value = override.split('=', 1)
        key = key.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(ValidationMessages.UNKNOWN_KEY.format(key=key))
        parsed[key] = _unquote(value)
    return parsed


def cast_value(key: str, value: str):
    """
    Cast one raw value.

    Raises:
        ConfigError: naming the key and the expected type
    """
    if key not in SCALAR_KEYS:
        raise ConfigError(ValidationMessages.UNKNOWN_KEY.format(key=key))
    cast, expected = SCALAR_KEYS[key]
    try:
        return cast(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(
            ValidationMessages.INVALID_VALUE.format(key=key, expected=expected, value=value)
        ) from e


def build_config(raw: Dict[str, str]) -> SimConfig:
    """
    SimConfig from a raw mapping, defaults filled in and invariants checked.

    Raises:
        ConfigError: on a bad value or a violated invariant
    """
    values = {key: cast_value(key, value) for key, value in raw.items()}

    def get(key: str, default):
        return values.get(key, default)

    agents = values.get('agents')
    if agents is not None:
        if 'n_agents' in values and values['n_agents'] != len(agents):
            raise ConfigError(ValidationMessages.CONSTRAINT.format(
                field='agents', constraint='one entry per agent (n_agents)', value=len(agents)
            ))
        n_agents = len(agents)
    else:
        n_agents = get('n_agents', IntegrationDefaults.N_AGENTS)

    seed = get('seed', IntegrationDefaults.SEED)
    params = SwarmParams(
        H=get('H', FeedbackDefaults.H),
        k=get('k', FeedbackDefaults.K),
        beta=get('beta', FeedbackDefaults.BETA),
        L=get('L', FeedbackDefaults.L),
        L_e=values.get('L_e'),
        alpha_min=get('alpha_min', FeedbackDefaults.ALPHA_MIN),
        Gamma=get('Gamma', FeedbackDefaults.GAMMA),
        v_floor=get('v_floor', FeedbackDefaults.V_FLOOR),
        sigma=get('sigma', FeedbackDefaults.SIGMA),
    )
    noise = NoiseParams(
        sigma_q=get('sigma_q', 0.0),
        sigma_a=get('sigma_a', 0.0),
        seed=seed,
        alpha_rate=get('alpha_rate', Modes.ALPHA_RATE_TRUTH),
    )
    defaults = InitialConditionDefaults
    init = InitSpec(
        x_range=(get('x_min', defaults.X_RANGE[0]), get('x_max', defaults.X_RANGE[1])),
        y_range=(get('y_min', defaults.Y_RANGE[0]), get('y_max', defaults.Y_RANGE[1])),
        speed_range=(get('speed_min', defaults.SPEED_RANGE[0]),
                     get('speed_max', defaults.SPEED_RANGE[1])),
        heading_range=(get('heading_min', defaults.HEADING_RANGE[0]),
                       get('heading_max', defaults.HEADING_RANGE[1])),
        min_spacing=get('min_spacing', defaults.MIN_SPACING),
        agents=agents,
    )
    config = SimConfig(
        n_agents=n_agents,
        mode=get('mode', Modes.YFM),
        params=params,
        noise=noise,
        dt=get('dt', IntegrationDefaults.DT),
        t_max=get('t_max', IntegrationDefaults.T_MAX),
        init=init,
        seed=seed,
        heading_mode=get('heading_mode', Modes.HEADING_LOOP),
    )
    config.validate()
    return config


def parse_config(text: str, overrides: Optional[Iterable[str]] = None) -> SimConfig:
    """
    Parse a scenario document, apply overrides and validate.

    Examples:
        parse_config('')             -> model defaults, dt = 0.01
        parse_config('k = 0.2')      -> low heading gain, rest default
        parse_config('beta = x')     -> ConfigError naming beta
    """
    raw = parse_document(text)
    raw.update(parse_overrides(overrides))
    return build_config(raw)


def load_config(path, overrides: Optional[List[str]] = None) -> Tuple[SimConfig, str]:
    """
    Read and parse a scenario file.

    Returns:
        (config, document text) so callers can record what was run

    Raises:
        ConfigError: if the file does not exist or does not parse
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(ValidationMessages.MISSING_CONFIG.format(path=path))
    text = path.read_text()
    logger.debug(f"Loaded scenario document {path}")
    return parse_config(text, overrides), text
