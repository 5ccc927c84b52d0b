"""Offline fixture tooling: mini-model export and golden generation."""

__version__ = "0.1.0"
