"""Coherent and squeezed states of ordinary and multiboson ladder operators on a truncated Fock space."""

__version__ = "0.1.0"
