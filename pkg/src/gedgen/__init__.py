"""Exact ReLU networks that edit a graph within a bounded edit distance."""

__version__ = "0.1.0"
