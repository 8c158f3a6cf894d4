"""Exact calculus for quasimorphisms, group extensions and filtered
complexes, with a verification harness (see the ``qmcoh`` CLI)."""

__version__ = "0.1.0"
