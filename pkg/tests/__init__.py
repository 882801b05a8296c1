"""Test package for scitopics."""
