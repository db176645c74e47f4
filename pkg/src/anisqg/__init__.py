"""Pseudo-spectral simulation of the anisotropically dissipated SQG equation
and numerical checks of the inequalities behind its global-regularity theory."""

__version__ = "0.1.0"
