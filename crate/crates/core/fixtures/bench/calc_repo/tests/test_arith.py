import unittest

from calc.arith import Accumulator, clamp


class ClampTests(unittest.TestCase):
    def test_inside(self):
        self.assertEqual(clamp(5, 0, 10), 5)

    def test_edges(self):
        self.assertEqual(clamp(-3, 0, 10), 0)
        self.assertEqual(clamp(42, 0, 10), 10)


class AccumulatorTests(unittest.TestCase):
    def test_total(self):
        acc = Accumulator(start=1)
        acc.add(2).add(3)
        self.assertEqual(acc.total(), 6)

    def test_empty(self):
        self.assertEqual(Accumulator().total(), 0)


if __name__ == "__main__":
    unittest.main()
