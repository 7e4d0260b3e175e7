"""Extremes of randomly contracted stationary Gaussian sequences.

Norming constants for maxima of S*X, exact simulation of dependent
Gaussian paths under contraction, Monte Carlo checks of the Gumbel weak
limit and of the almost-sure log-average limit, and deterministic
numerical diagnostics of the tail lemmas behind them.
"""
__version__ = "0.1.0"
