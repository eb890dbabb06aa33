"""Exact-arithmetic toolkit for cut-and-project sets, approximate subgroups,
counting quasimorphisms, and torus-hull return-time dynamics."""

__version__ = "0.1.0"
