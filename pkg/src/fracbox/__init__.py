"""Fractional elliptic problems with P1 finite elements and the box method."""

__version__ = "0.1.0"
