"""
Run configuration: system config files and sweep ranges.

A system config file holds ``key = value`` lines; ``#`` starts a comment.
Values are validated by PhysicalInputsSerializer, so a missing, unknown or
malformed key is reported by name.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
from django.conf import settings
from rest_framework.exceptions import ValidationError

from .core_types import HEKTOR, PhysicalInputs
from .exceptions import ConfigError
from .serializers import PhysicalInputsSerializer, SweepRangeSerializer

logger = logging.getLogger(__name__)


def _describe_errors(errors) -> str:
    parts = []
    for key, messages in errors.items():
        if isinstance(messages, (list, tuple)):
            messages = '; '.join(str(message) for message in messages)
        parts.append(f'{key}: {messages}')
    return ', '.join(parts)


def parse_config_text(text: str) -> Dict[str, str]:
    """
    Split config text into a key -> raw value mapping

    Raises:
        ConfigError: For a line without '=', an empty key or a repeated key
    """
    values = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f'line {number}: expected "key = value", got {line!r}')
        if key in values:
            raise ConfigError(f'line {number}: duplicate key {key}')
        values[key] = value
    return values


def physical_inputs_from_mapping(values: Dict[str, str]) -> PhysicalInputs:
    serializer = PhysicalInputsSerializer(data=values)
    if not serializer.is_valid():
        raise ConfigError(_describe_errors(serializer.errors))
    return serializer.to_physical_inputs()


def load_physical_inputs(path: Optional[str] = None) -> PhysicalInputs:
    """
    Read and validate a system config file

    Args:
        path: Config file; falls back to settings.HILL4BODY['DEFAULT_CONFIG'],
            then to the built-in Hektor inputs

    Returns:
        Validated PhysicalInputs

    Raises:
        ConfigError: If the file is unreadable or a key is missing, unknown or malformed
        InvalidPhysicalInput: If the values violate the physical constraints
    """
    path = path or settings.HILL4BODY.get('DEFAULT_CONFIG')
    if not path:
        logger.info("No config file given; using the built-in Sun-Jupiter-Hektor inputs")
        return HEKTOR

    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError(f'cannot read config file {path}: {e.strerror or e}') from e

    inputs = physical_inputs_from_mapping(parse_config_text(text))
    logger.info(f"Loaded system config from {path}")
    return inputs


@dataclass(frozen=True)
class SweepRange:
    start: float
    stop: float
    count: int
    spacing: str = 'linear'

    @classmethod
    def from_values(cls, **values) -> 'SweepRange':
        serializer = SweepRangeSerializer(data=values)
        try:
            serializer.is_valid(raise_exception=True)
        except ValidationError as e:
            raise ConfigError(_describe_errors(e.detail)) from e
        return cls(**serializer.validated_data)

    def grid(self) -> np.ndarray:
        if self.spacing == 'log':
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation of the hill4body command needs"""

    subcommand: str
    input_path: Optional[str] = None
    output_format: str = 'csv'
    output_path: Optional[str] = None
    sweep: Optional[SweepRange] = None

    @property
    def writes_to_stdout(self) -> bool:
        return self.output_path is None


def table_columns(serializer_class) -> List[str]:
    return list(serializer_class().fields.keys())
