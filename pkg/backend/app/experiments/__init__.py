"""Experiment harness, parameter sweeps and report rendering."""
