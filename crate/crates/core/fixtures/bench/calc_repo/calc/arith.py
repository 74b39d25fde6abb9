"""Arithmetic primitives."""


def clamp(value, low, high):
    """Limit value to the closed interval [low, high]."""
    if value < low:
        return low
    if value > high:
        return high
    return value


def mean(values):
    """Arithmetic mean of a non-empty sequence."""
    return sum(values) / len(values)


class Accumulator:
    """Running sum of added values."""

    def __init__(self, start=0):
        self.items = []
        self.start = start

    def add(self, value):
        self.items.append(value)
        return self

    def total(self):
        """Return the start value plus every added value."""
        result = self.start
        for item in self.items:
            result += item
        return result
