"""HTTP service exposing the core operations."""

from .app import create_app

__all__ = ["create_app"]
