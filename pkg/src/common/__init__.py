"""Common module for scitopics.

Configuration, errors, run manifests, artifact files and the ordered process pool
shared by every stage.
"""
