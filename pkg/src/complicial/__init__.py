"""Finite 2-categories, their marked nerves, lifting checks against the
elementary anodyne extensions, the marked-to-natural factorization, and
2-polygraph presentations of categorification."""

__version__ = "0.1.0"
