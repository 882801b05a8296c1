"""Integration tests for scitopics."""
