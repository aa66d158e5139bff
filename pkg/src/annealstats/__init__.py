"""Quantum vs classical annealing on Ising problems with degenerate ground states."""

__version__ = "0.1.0"
