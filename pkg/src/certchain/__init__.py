"""Permissioned proof-of-authority chain with a certificate registry."""

__version__ = "0.1.0"
