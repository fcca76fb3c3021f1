"""Exact descent of Hecke operators along mixed double cosets."""

__version__ = "0.1.0"
