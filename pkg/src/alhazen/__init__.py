"""Reflection points on circular and conic mirrors, and the triangular
ratio metric on disk and conic domains."""

__version__ = "0.1.0"
