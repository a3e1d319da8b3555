"""Semantic Brand Score analytics for job-posting corpora."""

__version__ = "0.1.0"
