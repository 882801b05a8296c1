"""scitopics package.

Structural topic modelling of a journal corpus with year, journal and team
covariates, followed by topic-count selection, prevalence and concentration
tables, topic networks and effect regressions under posterior uncertainty.
"""

__version__ = "0.1.0"
