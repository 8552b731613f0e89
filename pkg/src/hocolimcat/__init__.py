"""Homotopy colimits of diagrams of algebras over Σ-free Cat-operads."""

__version__ = "0.1.0"
