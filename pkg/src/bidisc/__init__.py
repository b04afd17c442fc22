"""Numerics for the Ekeland-Hofer capacities of the Lagrangian bidisc D^2 x D^2."""

__version__ = "0.1.0"
