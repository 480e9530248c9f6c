"""Quantum optimal control and spin-cat error correction for spin qudits."""

__version__ = "0.1.0"
