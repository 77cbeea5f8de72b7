"""Event-driven simulation and exact schedule verification."""
