"""Utility modules for the Poisson path-space lab."""
