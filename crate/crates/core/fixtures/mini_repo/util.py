def add(a, b):
    "Add two integers."
    return a + b


def sub(a, b):
    "Subtract b from a."
    return a - b
