"""Mittag-Leffler and Linnik distribution laboratory."""

__version__ = "0.1.0"
