"""Exact algebra and intersection homology around the Pinchuk map."""

__version__ = "0.1.0"
