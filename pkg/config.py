"""
Configuration management for the involutive analysis toolkit.

This module holds the dataclasses for computation limits and analysis
settings, loads them from YAML files and applies defaults taken from the
environment.
"""

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

ENV_ITERATION_CAP = 'INVOLUTIVE_ITERCAP'
ENV_DEGREE_CAP = 'INVOLUTIVE_DEGCAP'

DIVISIONS = ('pommaret', 'janet', 'thomas')
ORDERS = ('lex', 'deglex', 'degrevlex')
FORMATS = ('json', 'text')
COMMANDS = ('complete', 'delta-check', 'regular-coords', 'analyze', 'decompose', 'standard-pairs', 'primary',
            'resolve', 'betti', 'regularity', 'saturate', 'trung')


def _env_int(name: str) -> Optional[int]:
    value = os.environ.get(name)
    if value is None or value.strip() == '':
        return None
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"Environment variable {name} must be an integer, got '{value}'")


@dataclass
class Limits:
    """Caps for completion and the coordinate search."""
    max_iterations: Optional[int] = None  # None: 10 * input degree + 50
    max_degree: Optional[int] = None
    elementary_rounds: Optional[int] = None  # None: 5 * n^2
    escalation_attempts: int = 8
    verify_degree: Optional[int] = None  # None: basis degree + 3

    def iteration_cap(self, input_degree: int) -> int:
        if self.max_iterations is not None:
            return self.max_iterations
        return 10 * max(input_degree, 0) + 50

    def round_cap(self, nvars: int) -> int:
        if self.elementary_rounds is not None:
            return self.elementary_rounds
        return 5 * nvars * nvars

    def check_degree(self, basis_degree: int) -> int:
        if self.verify_degree is not None:
            return self.verify_degree
        return basis_degree + 3

    @classmethod
    def from_environment(cls) -> 'Limits':
        return cls(max_iterations=_env_int(ENV_ITERATION_CAP), max_degree=_env_int(ENV_DEGREE_CAP))


@dataclass
class AnalysisSettings:
    """General analysis settings."""
    division: str = 'pommaret'
    order: str = 'degrevlex'
    seed: int = 0
    output_format: str = 'json'
    max_workers: int = 4


@dataclass
class AnalysisConfig:
    """Main configuration object containing all settings."""
    settings: AnalysisSettings = field(default_factory=AnalysisSettings)
    limits: Limits = field(default_factory=Limits.from_environment)


def _validate(settings: AnalysisSettings, limits: Limits) -> None:
    if settings.division not in DIVISIONS:
        raise ValueError(f"Unknown division '{settings.division}' (expected one of {', '.join(DIVISIONS)})")
    if settings.order not in ORDERS:
        raise ValueError(f"Unknown term order '{settings.order}' (expected one of {', '.join(ORDERS)})")
    if settings.output_format not in FORMATS:
        raise ValueError(f"Unknown output format '{settings.output_format}'")
    if settings.max_workers < 1:
        raise ValueError("max_workers must be at least 1")
    for name in ('max_iterations', 'max_degree', 'elementary_rounds', 'verify_degree'):
        value = getattr(limits, name)
        if value is not None and value < 0:
            raise ValueError(f"Limit '{name}' must be non-negative")


def load_config(config_path: str) -> AnalysisConfig:
    """
    Load configuration from YAML file.

    Args:
        config_path: Path to the YAML configuration file

    Returns:
        AnalysisConfig object with loaded configuration

    Raises:
        FileNotFoundError: If config file doesn't exist
        yaml.YAMLError: If YAML parsing fails
        ValueError: If configuration is invalid
    """
    config_file = Path(config_path)

    if not config_file.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    try:
        with open(config_file, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise yaml.YAMLError(f"Failed to parse YAML configuration: {e}")

    if not data:
        raise ValueError("Configuration file is empty")
    if not isinstance(data, dict):
        raise ValueError("Configuration must be a mapping")

    settings_data = data.get('settings', {}) or {}
    settings = AnalysisSettings(
        division=settings_data.get('division', 'pommaret'),
        order=settings_data.get('order', 'degrevlex'),
        seed=int(settings_data.get('seed', 0)),
        output_format=settings_data.get('output_format', 'json'),
        max_workers=int(settings_data.get('max_workers', 4))
    )

    env_limits = Limits.from_environment()
    limits_data = data.get('limits', {}) or {}
    limits = Limits(
        max_iterations=limits_data.get('max_iterations', env_limits.max_iterations),
        max_degree=limits_data.get('max_degree', env_limits.max_degree),
        elementary_rounds=limits_data.get('elementary_rounds'),
        escalation_attempts=int(limits_data.get('escalation_attempts', 8)),
        verify_degree=limits_data.get('verify_degree')
    )

    _validate(settings, limits)
    return AnalysisConfig(settings=settings, limits=limits)


def save_config_to_yaml(config: AnalysisConfig, output_path: str) -> None:
    """
    Save configuration to YAML file.

    Args:
        config: AnalysisConfig object to save
        output_path: Path where to save the YAML file
    """
    config_dict = {
        'settings': {
            'division': config.settings.division,
            'order': config.settings.order,
            'seed': config.settings.seed,
            'output_format': config.settings.output_format,
            'max_workers': config.settings.max_workers
        },
        'limits': {
            'max_iterations': config.limits.max_iterations,
            'max_degree': config.limits.max_degree,
            'elementary_rounds': config.limits.elementary_rounds,
            'escalation_attempts': config.limits.escalation_attempts,
            'verify_degree': config.limits.verify_degree
        }
    }

    with open(output_path, 'w', encoding='utf-8') as f:
        yaml.dump(config_dict, f, default_flow_style=False, sort_keys=False)
