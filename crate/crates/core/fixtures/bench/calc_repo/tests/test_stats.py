import unittest

from calc.stats import variance


class VarianceTests(unittest.TestCase):
    def test_constant(self):
        self.assertEqual(variance([4, 4, 4]), 0)

    def test_spread(self):
        self.assertAlmostEqual(variance([1, 2, 3, 4]), 1.25)


if __name__ == "__main__":
    unittest.main()
