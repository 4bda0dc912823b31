"""Reviewer-aware rebuttal drafting and evaluation toolkit."""

__version__ = "0.1.0"
