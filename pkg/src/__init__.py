"""Rényi common information of the doubly symmetric binary source."""

__version__ = "0.1.0"
