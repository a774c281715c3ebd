"""Toolkit for superlative expressions: detection, comparison-frame
annotation, corpus statistics, model scoring and ambiguity analysis."""

__version__ = "0.1.0"
