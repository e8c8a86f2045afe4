"""Tabular entropy-regularized actor-critic laboratory."""

from ._entac import *  # noqa: F401,F403
