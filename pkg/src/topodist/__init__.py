"""Topology Distance and companion metrics for comparing feature clouds."""

__version__ = "0.1.0"
