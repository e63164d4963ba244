"""Service configuration: one checkpoint per task tag, plus runtime knobs.

YAML layout::

    host: 127.0.0.1
    port: 8000
    device: cpu
    precision: float64        # float64 keeps batch composition out of the scores
    max_length: 256
    max_batch: 256
    models:
      abstract: checkpoints/abstract
      rationale: checkpoints/rationale
      neutral: checkpoints/neutral
      support: checkpoints/support

``MODEL_SERVER_PORT`` and ``MODEL_SERVER_DEVICE`` override the file.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import yaml

TASK_TAGS = ("abstract", "rationale", "neutral", "support")

PORT_ENV_VAR = "MODEL_SERVER_PORT"
DEVICE_ENV_VAR = "MODEL_SERVER_DEVICE"


class ConfigError(ValueError):
    pass


@dataclass
class ServerConfig:
    models: dict[str, str] = field(default_factory=dict)
    host: str = "127.0.0.1"
    port: int = 8000
    device: str = "cpu"
    precision: str = "float64"
    max_length: int = 256
    max_batch: int = 256

    def __post_init__(self):
        for tag in self.models:
            if tag not in TASK_TAGS:
                raise ConfigError(f"unknown task tag {tag!r} (expected one of {TASK_TAGS})")
        if self.precision not in ("float32", "float64"):
            raise ConfigError(f"precision must be float32 or float64, got {self.precision!r}")
        if self.max_length < 8:
            raise ConfigError("max_length must be >= 8")
        if self.max_batch < 1:
            raise ConfigError("max_batch must be >= 1")
        if port := os.environ.get(PORT_ENV_VAR):
            self.port = int(port)
        if device := os.environ.get(DEVICE_ENV_VAR):
            self.device = device


def load_config(path) -> ServerConfig:
    with open(path, encoding="utf-8") as handle:
        raw = yaml.safe_load(handle) or {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config root must be a mapping")
    allowed = {"models", "host", "port", "device", "precision", "max_length", "max_batch"}
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {sorted(unknown)}")
    return ServerConfig(**raw)
