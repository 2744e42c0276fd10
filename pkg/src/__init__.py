"""Holonomy of horizontal lifts in Hopf-type bundles."""

__version__ = "1.0.0"
