"""Steerable AutoML engine: search-space control, bandit + GP-EI search,
live summaries, and an HTTP API for monitoring and in-situ reconfiguration."""

__version__ = "0.1.0"
