"""HTTP service exposing estimator sessions and benchmark jobs."""

from .app import app, create_app

__all__ = ["app", "create_app"]
