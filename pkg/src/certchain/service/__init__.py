"""HTTP service wrapping a node."""

from .app import create_app

__all__ = ["create_app"]
