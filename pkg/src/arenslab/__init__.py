"""Exact Arens extensions of regular multilinear operators on vector lattices."""

__version__ = "0.1.0"
