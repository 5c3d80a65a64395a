"""Numerical oracles: orbit sampling, moment maps, gradient flow and validation."""
