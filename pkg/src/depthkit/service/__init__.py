"""FastAPI service wrapping the core library."""

from .app import app

__all__ = ["app"]
