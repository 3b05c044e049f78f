"""Domain models for pycovd."""
