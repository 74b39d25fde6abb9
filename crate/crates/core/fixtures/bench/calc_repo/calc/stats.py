"""Descriptive statistics built on the arithmetic helpers."""

from calc.arith import mean


def variance(values):
    """Population variance of a non-empty sequence."""
    center = mean(values)
    squares = [(v - center) ** 2 for v in values]
    return sum(squares) / len(squares)
