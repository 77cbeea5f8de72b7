"""Seeded instance generators and the instance file format."""
