"""Polynomial functor calculus over finite bases."""

__version__ = "0.1.0"
