"""Layered pathwidth, stack layouts and 3-track layouts."""
