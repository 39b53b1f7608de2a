"""Exact certification of Abels' compact-presentability criterion for block matrix groups."""

__version__ = "0.1.0"
