import math
import unittest

import sympy as sp

from denjoypy.classes.rotation import RotationNumber
from denjoypy.exceptions.exceptions import (
    InsufficientExpansionError,
    IrrationalityError,
    ShallowRefinementWarning,
)
from denjoypy.oracle import brute_closest_returns
from denjoypy.solvers.continued_fractions import (
    convergents,
    diophantine_class_estimate,
    norm_q_alpha,
    quadratic_rotation,
    three_gap_threshold,
)

GOLDEN = (math.sqrt(5) - 1) / 2
SQRT3M1 = math.sqrt(3) - 1


class TestDenominators(unittest.TestCase):
    def test_golden_denominators(self):
        alpha = RotationNumber.golden()
        self.assertEqual([alpha.q(n) for n in range(1, 6)], [1, 2, 3, 5, 8])

    def test_sqrt3m1_denominators(self):
        alpha = RotationNumber.sqrt3m1()
        self.assertEqual([alpha.q(n) for n in range(1, 7)], [1, 3, 4, 11, 15, 41])

    def test_periodic_two(self):
        alpha = RotationNumber.periodic([2])
        self.assertEqual([alpha.q(n) for n in range(1, 5)], [2, 5, 12, 29])

    def test_square_growth(self):
        alpha = RotationNumber.square_growth(2)
        self.assertEqual([alpha.q(n) for n in range(1, 5)], [2, 5, 27, 734])

    def test_numerators_match_denominators(self):
        alpha = RotationNumber.sqrt3m1()
        for n in range(1, 12):
            p, q = alpha.p(n), alpha.q(n)
            self.assertLess(abs(p / q - SQRT3M1), 1 / q**2)

    def test_prefix_without_extension_runs_out(self):
        alpha = RotationNumber.from_quotients([1, 2, 3])
        self.assertEqual(alpha.q(3), 10)
        with self.assertRaises(InsufficientExpansionError):
            convergents(alpha, 5)

    def test_prefix_then_constant(self):
        alpha = RotationNumber.from_quotients([3], then=1)
        self.assertEqual(alpha.quotients(5), [3, 1, 1, 1, 1])

    def test_to_float(self):
        self.assertAlmostEqual(RotationNumber.golden().to_float(), GOLDEN, places=14)
        self.assertAlmostEqual(RotationNumber.sqrt3m1().to_float(), SQRT3M1, places=14)

    def test_alpha_intervals_are_nested(self):
        alpha = RotationNumber.golden()
        for depth in range(2, 15):
            inner, outer = alpha.alpha_interval(depth), alpha.alpha_interval(depth - 1)
            self.assertTrue(inner.is_subset_of(outer))
            self.assertTrue(float(inner.lo) <= GOLDEN <= float(inner.hi))


class TestNorms(unittest.TestCase):
    def test_golden_norms(self):
        alpha = RotationNumber.golden()
        first, second = norm_q_alpha(alpha, 1), norm_q_alpha(alpha, 2)

        self.assertTrue(float(first.lo) <= 1 - GOLDEN <= float(first.hi))
        self.assertTrue(float(second.lo) <= 2 * GOLDEN - 1 <= float(second.hi))

    def test_sqrt3m1_norm(self):
        theta = norm_q_alpha(RotationNumber.sqrt3m1(), 4)
        self.assertTrue(float(theta.lo) <= 11 * SQRT3M1 - 8 <= float(theta.hi))

    def test_relative_width_and_chain(self):
        alpha = RotationNumber.golden()
        for c in convergents(alpha, 20):
            self.assertTrue(c.satisfies_chain())
            self.assertLessEqual(c.theta.relative_width(), sp.Rational(2, alpha.q(c.n + 2)))

    def test_theta_form_evaluates_to_norm(self):
        alpha = RotationNumber.sqrt3m1()
        for n in range(1, 8):
            d, j = alpha.convergent(n).theta_form()
            theta = norm_q_alpha(alpha, n)
            self.assertTrue(float(theta.lo) <= d * SQRT3M1 - j <= float(theta.hi))

    def test_norms_match_closest_returns(self):
        for alpha in (RotationNumber.golden(), RotationNumber.sqrt3m1()):
            returns = brute_closest_returns(alpha.to_float(), alpha.q(20))

            self.assertEqual([k for k, _ in returns], [alpha.q(n) for n in range(1, 21)])
            for n, (_, norm) in enumerate(returns, start=1):
                theta = norm_q_alpha(alpha, n)
                self.assertTrue(float(theta.lo) - 1e-9 <= norm <= float(theta.hi) + 1e-9)

    def test_finite_stream_limits_refinement(self):
        alpha = RotationNumber.from_quotients([1] * 7)
        with self.assertWarns(ShallowRefinementWarning):
            c = alpha.convergent(5)
        self.assertEqual(c.refinement_depth, 7)

    def test_convergents_needs_positive_depth(self):
        with self.assertRaises(ValueError):
            convergents(RotationNumber.golden(), 0)


class TestThreeGapThreshold(unittest.TestCase):
    def test_golden(self):
        alpha = RotationNumber.golden()
        self.assertEqual(three_gap_threshold(alpha, 4), 6)
        self.assertEqual(three_gap_threshold(alpha, 1), 1)

    def test_sqrt3m1(self):
        self.assertEqual(three_gap_threshold(RotationNumber.sqrt3m1(), 4), 13)

    def test_matches_convergent(self):
        alpha = RotationNumber.periodic([1, 3])
        for c in convergents(alpha, 10):
            self.assertEqual(c.N, three_gap_threshold(alpha, c.n))
            self.assertEqual(c.Q, c.q + c.q_next)


class TestQuadraticRotation(unittest.TestCase):
    def test_golden_from_surd(self):
        alpha = quadratic_rotation(-1, 1, 2, 5)
        self.assertEqual(alpha.quotients(6), [1] * 6)

    def test_purely_periodic_surd(self):
        alpha = quadratic_rotation(1, 1, 2, 5)
        self.assertAlmostEqual(alpha.to_float(), GOLDEN, places=14)

    def test_sqrt_two(self):
        alpha = quadratic_rotation(0, 1, 1, 2)
        self.assertEqual(alpha.quotients(5), [2] * 5)

    def test_shifted_surd(self):
        alpha = quadratic_rotation(-1, 1, 1, 5)
        self.assertEqual(alpha.quotients(4), [4] * 4)
        self.assertAlmostEqual(alpha.to_float(), math.sqrt(5) - 2, places=14)

    def test_rational_raises(self):
        with self.assertRaises(IrrationalityError):
            quadratic_rotation(1, 1, 2, 4)
        with self.assertRaises(IrrationalityError):
            quadratic_rotation(1, 0, 2, 5)

    def test_zero_denominator_raises(self):
        with self.assertRaises(ValueError):
            quadratic_rotation(1, 1, 0, 5)


class TestDiophantineEstimate(unittest.TestCase):
    def test_golden_is_close_to_one(self):
        estimate = diophantine_class_estimate(RotationNumber.golden(), (10, 30))
        self.assertLess(estimate.nu_hat, 1.11)
        self.assertEqual(len(estimate.trace), 21)
        self.assertTrue(all(ratio > 1 for _, ratio in estimate.trace))

    def test_square_growth_is_close_to_two(self):
        estimate = diophantine_class_estimate(RotationNumber.square_growth(2), (4, 8))
        for _, ratio in estimate.trace:
            self.assertAlmostEqual(ratio, 2.0, delta=0.05)

    def test_window_must_start_at_two(self):
        with self.assertRaises(ValueError):
            diophantine_class_estimate(RotationNumber.golden(), (1, 5))


if __name__ == "__main__":
    unittest.main()
