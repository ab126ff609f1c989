"""Finite-horizon laboratory for two operators with unusual sets of recurrent vectors."""

__version__ = "0.1.0"
