"""Numerical quantum harmonic analysis on polyanalytic Fock spaces."""

__version__ = "0.1.0"
