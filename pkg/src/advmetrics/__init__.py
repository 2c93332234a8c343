"""Adversarial robustness harness for NLG evaluation metrics."""

__version__ = "0.1.0"
