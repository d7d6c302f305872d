"""Exact and empirical checks of superorthogonality phenomena."""

__version__ = "0.1.0"
