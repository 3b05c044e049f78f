"""Utilities for pycovd."""
