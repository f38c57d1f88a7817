"""Exact computation of h^1 and h_1 for Anderson t-motives via affine equations."""

__version__ = "0.1.0"
