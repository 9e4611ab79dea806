"""Exact symbolic verification of split Lie 2-algebroids, self-dual
2-representations, matched pairs, and degenerate Courant algebroids over
polynomial bases."""

__version__ = "0.1.0"
