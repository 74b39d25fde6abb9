import math


class Circle:
    """A circle described by its radius."""

    radius = 1.0

    def area(self):
        return math.pi * self.radius ** 2

    def perimeter(self):
        return 2 * math.pi * self.radius
