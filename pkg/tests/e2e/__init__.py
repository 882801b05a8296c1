"""End-to-end tests for scitopics."""
