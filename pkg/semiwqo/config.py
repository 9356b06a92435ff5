#config.py

import logging
import os
from dataclasses import dataclass, field, fields, replace
from typing import Optional

import yaml

from semiwqo.constants import (
    BRUTEFORCE_CUTWIDTH_N_LIMIT,
    CONFIG_ENV_VAR,
    CUTWIDTH_N_LIMIT,
    DEFAULT_CONFIG_FILE,
    DOMINATES_BRUTEFORCE_N_LIMIT,
    FORMAT_HUMAN,
    IMMERSION_HOST_N_LIMIT,
    IMMERSION_PATTERN_N_LIMIT,
    ORDERED_CUTS_EXHAUSTIVE_N_LIMIT,
    OUTPUT_FORMATS,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Limits:
    """Size caps for the exact and brute-force procedures."""

    cutwidth_n: int = CUTWIDTH_N_LIMIT
    bruteforce_cutwidth_n: int = BRUTEFORCE_CUTWIDTH_N_LIMIT
    immersion_pattern_n: int = IMMERSION_PATTERN_N_LIMIT
    immersion_host_n: int = IMMERSION_HOST_N_LIMIT
    ordered_cuts_exhaustive_n: int = ORDERED_CUTS_EXHAUSTIVE_N_LIMIT
    dominates_bruteforce_n: int = DOMINATES_BRUTEFORCE_N_LIMIT

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, int) or value <= 0:
                raise ValueError(f"limit {f.name} must be a positive integer, got {value!r}")

    @classmethod
    def from_mapping(cls, data: Optional[dict]) -> "Limits":
        data = dict(data or {})
        known = {f.name for f in fields(cls)}
        for key in sorted(set(data) - known):
            logger.warning(f"Ignoring unknown limit '{key}'")
        return cls(**{k: v for k, v in data.items() if k in known})


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation: the subcommand, its inputs and the shared knobs."""

    subcommand: str
    inputs: tuple = ()
    c: Optional[int] = None
    seed: Optional[int] = None
    limits: Limits = field(default_factory=Limits)
    output_format: str = FORMAT_HUMAN
    trace_path: Optional[str] = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.c is not None and self.c < 0:
            raise ValueError(f"c must be non-negative, got {self.c}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"unknown output format {self.output_format!r}")

    def with_limits(self, **overrides) -> "RunConfig":
        return replace(self, limits=replace(self.limits, **overrides))


@dataclass(frozen=True)
class FileSettings:
    """Contents of the YAML configuration file."""

    limits: Limits = field(default_factory=Limits)
    log_level: str = "INFO"
    log_file: Optional[str] = None
    output_format: str = FORMAT_HUMAN


def load_yaml_config(path):
    with open(path, 'r') as f:
        return yaml.safe_load(f) or {}


def load_settings(path: Optional[str] = None) -> FileSettings:
    """
    Load settings from `path`, the file named by $SEMIWQO_CONFIG, or
    ./semiwqo.yaml, in that order. A missing file yields the defaults.
    """
    path = path or os.environ.get(CONFIG_ENV_VAR, DEFAULT_CONFIG_FILE)
    if not os.path.exists(path):
        logger.debug(f"No config file at {path}; using built-in defaults")
        return FileSettings()

    cfg = load_yaml_config(path)
    logger.debug(f"Loaded config from {path}")
    known = {"limits", "log_level", "log_file", "format"}
    for key in sorted(set(cfg) - known):
        logger.warning(f"Ignoring unknown config key '{key}' in {path}")

    output_format = cfg.get("format", FORMAT_HUMAN)
    if output_format not in OUTPUT_FORMATS:
        raise ValueError(f"{path}: unknown output format {output_format!r}")

    return FileSettings(
        limits=Limits.from_mapping(cfg.get("limits")),
        log_level=str(cfg.get("log_level", "INFO")).upper(),
        log_file=cfg.get("log_file"),
        output_format=output_format,
    )
