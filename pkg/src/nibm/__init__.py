"""Nonintersecting Brownian motion on the circle: exact finite-n machinery and limits."""

__version__ = "0.1.0"
