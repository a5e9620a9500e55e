"""Explainable worker-performance analytics for industrial workstations."""

__version__ = "0.1.0"
