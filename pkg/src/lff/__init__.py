"""Finite-model workbench for many-sorted first-order logic."""

__version__ = "0.1.0"
