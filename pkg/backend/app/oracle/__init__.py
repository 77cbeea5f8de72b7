"""Offline feasibility: max-flow oracle and the exhaustive cross-check."""
