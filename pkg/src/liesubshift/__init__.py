"""Exact experiments on Lie algebraic subshifts, the Grigorchuk group and its group ring."""

__version__ = "0.1.0"
