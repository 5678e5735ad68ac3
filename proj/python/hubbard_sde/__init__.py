"""Fermi-Hubbard thermodynamics from Girsanov-transformed matrix SDEs."""

from ._core import ConfigError, NumericalError, ResourceError, ed_energy, energy, pfaffian, run, toy

__all__ = ["ConfigError", "NumericalError", "ResourceError", "ed_energy", "energy", "pfaffian", "run", "toy"]
