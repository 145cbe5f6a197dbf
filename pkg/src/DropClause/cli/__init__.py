"""CLI package exports."""

from .app import app, main
from .config import ConfigError, RunConfig, load_run_config
from .datasets import DatasetKind, LoadedData, load_like_model, load_training_data
from .persistence import FORMAT_VERSION, MODEL_MAGIC, ModelFormatError, load_model, save_model

__all__ = [
    "app",
    "main",
    "ConfigError",
    "RunConfig",
    "load_run_config",
    "DatasetKind",
    "LoadedData",
    "load_like_model",
    "load_training_data",
    "FORMAT_VERSION",
    "MODEL_MAGIC",
    "ModelFormatError",
    "load_model",
    "save_model",
]
