"""Incidence bialgebras of monoidal decomposition spaces, weak antipodes and
Möbius inversion, computed exactly from finite combinatorial data."""

__version__ = "0.1.0"
