"""Invariants of signed shifts of finite type, including the homology of signed s/u-bijective pairs."""

__version__ = "0.1.0"
