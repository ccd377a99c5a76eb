"""Exact desk-scale invariants of finite p-groups and graded cohomology-ring models."""

__version__ = "0.1.0"
