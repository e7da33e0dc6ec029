"""Exact-arithmetic magnitudes, ratios and real-number codings built from relations."""

__version__ = "0.1.0"
