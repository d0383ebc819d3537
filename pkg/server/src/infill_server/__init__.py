from .app import ServerConfig, create_app
from .model import StubModel, load_model

__all__ = ["ServerConfig", "StubModel", "create_app", "load_model"]
