from util import add
from shapes import Circle


def main(circle):
    total = add(1, 2)
    return total + Circle.area(circle)
