"""Secure lossless source coding with rate-limited helpers: regions, closed forms, binning simulator."""

__version__ = "0.1.0"
