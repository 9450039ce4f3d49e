from .config import ConfigError, ServiceConfig, load_config
from .engine import Engine

__all__ = ["ConfigError", "Engine", "ServiceConfig", "load_config"]
