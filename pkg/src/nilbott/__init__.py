"""Exact-arithmetic engine for iterated circle-bundle groups over flat
2-dimensional bases: polycyclic collection, twisted second cohomology,
catalogue classification, geometric realization and invariant checks."""

__version__ = "0.1.0"
