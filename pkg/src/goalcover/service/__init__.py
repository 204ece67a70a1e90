"""HTTP service wrapping the goalcover package."""

from .app import app, create_app

__all__ = ["app", "create_app"]
