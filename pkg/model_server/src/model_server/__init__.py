"""Inference service for transformer pair-classifiers behind the
claim-verification scoring protocol."""

from .app import create_app, create_app_from_config, build_registry
from .config import ServerConfig, load_config
from .registry import CheckpointError, ModelRegistry, ServedModel, UnknownTaskError

__version__ = "0.1.0"
