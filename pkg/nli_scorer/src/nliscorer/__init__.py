"""Entailment cross-encoder scorer for the advmetrics wire protocol."""

__version__ = "0.1.0"
