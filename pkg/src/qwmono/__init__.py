"""Quantum Weyl group operators and monodromy of the Casimir connection."""

__version__ = "0.1.0"
