"""Spatio-temporal transfer functions for linear constant-coefficient PDEs."""

__version__ = "0.1.0"
