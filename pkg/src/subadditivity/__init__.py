"""Exact verification of strict subadditivity of tensor border rank."""

__version__ = "0.1.0"
