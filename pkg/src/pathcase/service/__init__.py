from .engine import Engine, build_indexes
from .jobs import JobRegistry
from .app import create_app

__all__ = ["Engine", "JobRegistry", "build_indexes", "create_app"]
