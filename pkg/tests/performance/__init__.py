"""Performance tests for scitopics."""
