"""Numerical toolkit for representations of PSL(2, Z) into PU(3,1)."""

__version__ = "0.1.0"
