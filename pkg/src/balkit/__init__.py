"""Potential-theoretic characteristics of discrete planar charges."""

__version__ = "0.1.0"
