import math
import unittest

import numpy as np
import sympy as sp

from denjoypy.classes.gap_sequence import ExceptionRule
from denjoypy.classes.rotation import RotationNumber
from denjoypy.exceptions.exceptions import InvalidOrderStatisticError
from denjoypy.parser.constants import SERIES_COLUMNS, SLOPE_TOLERANCE
from denjoypy.shared.intervals import lower, midpoint, upper
from denjoypy.solvers.bounds import (
    bound_a,
    bound_b,
    bound_c,
    bound_order_stat,
    candidate_offsets,
    lower_bound_series,
    outer_partition_sum,
    partition_sum,
)
from denjoypy.solvers.dimension import liminf_report, reference_constants
from denjoypy.solvers.gap_lengths import classical_sequence, perturbed_sequence, scaled_sequence

C_HALF = 2 * math.pi**2 / 6 - 1


class TestBoundA(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.alpha = RotationNumber.golden()
        cls.seq = classical_sequence("1/2")

    def test_golden_n4(self):
        # q_4 = 5, N_4 = 6, and the smallest length in [-6, 6] is l_6 = 1 / (49 c)
        value = bound_a(self.alpha, self.seq, "1/2", 4)
        self.assertAlmostEqual(midpoint(value), 5 * math.sqrt(1 / (49 * C_HALF)), delta=1e-9)
        self.assertAlmostEqual(midpoint(value), 0.4721, delta=1e-4)
        self.assertLessEqual(lower(value), upper(value))

    def test_beta_as_float_or_string(self):
        a = bound_a(self.alpha, self.seq, 0.5, 6)
        b = bound_a(self.alpha, self.seq, "1/2", 6)
        self.assertEqual(a._mpi_, b._mpi_)

    def test_non_positive_beta_raises(self):
        with self.assertRaises(ValueError):
            bound_a(self.alpha, self.seq, 0, 4)

    def test_golden_series_approaches_limit(self):
        series = lower_bound_series(self.alpha, self.seq, "1/2", (10, 30), method="a")
        summary = liminf_report(series, (10, 30))
        constants = reference_constants("1/2")

        self.assertTrue(1.04 <= summary.infimum * C_HALF <= 1.16)
        limit = constants["method_a_limit"]
        self.assertAlmostEqual(series.row(30).bound, limit, delta=0.01 * limit)
        self.assertLess(abs(summary.trend_slope), 1e-3)

    def test_trend_follows_beta(self):
        above = lower_bound_series(self.alpha, self.seq, 0.6, (10, 20), method="a")
        below = lower_bound_series(self.alpha, self.seq, 0.4, (10, 20), method="a")

        self.assertLess(liminf_report(above, (10, 20)).trend_slope, -0.05)
        self.assertGreater(liminf_report(below, (10, 20)).trend_slope, 0.05)


class TestBoundB(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.alpha = RotationNumber.golden()
        cls.seq = classical_sequence("1/2")

    def test_no_truncation_is_bound_a(self):
        for n in (3, 4, 9):
            self.assertEqual(
                bound_b(self.alpha, self.seq, "1/2", n, L=0)._mpi_,
                bound_a(self.alpha, self.seq, "1/2", n)._mpi_,
            )

    def test_grows_with_truncation(self):
        values = [lower(bound_b(self.alpha, self.seq, "1/2", 8, L=L)) for L in (0, 1, 3, 10)]
        self.assertTrue(all(a < b for a, b in zip(values, values[1:])))

    def test_golden_limit_constant(self):
        value = bound_b(self.alpha, self.seq, "1/2", 20, L=200)
        limit = reference_constants("1/2")["method_b_limit"]
        self.assertAlmostEqual(midpoint(value), limit, delta=0.01 * limit)

    def test_negative_truncation_raises(self):
        with self.assertRaises(ValueError):
            bound_b(self.alpha, self.seq, "1/2", 4, L=-1)


class TestBoundC(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.seq = classical_sequence("1/2")

    def test_even_block_length_dominates_b(self):
        # Q_3 = 8 for golden and Q_4 = 26 for sqrt3m1; the blocks at offset -N sit inside those of b
        cases = [(RotationNumber.golden(), 3), (RotationNumber.sqrt3m1(), 4)]
        for alpha, n in cases:
            Q = alpha.q(n) + alpha.q(n + 1)
            self.assertEqual(Q % 2, 0)

            value, offset = bound_c(alpha, self.seq, "1/2", n, L=2)
            self.assertGreaterEqual(lower(value), lower(bound_b(alpha, self.seq, "1/2", n, L=2)))
            self.assertTrue(-Q + 1 <= offset <= 0)

    def test_odd_block_length_close_to_b(self):
        alpha = RotationNumber.golden()
        value, _ = bound_c(alpha, self.seq, "1/2", 4, L=2)
        b = bound_b(alpha, self.seq, "1/2", 4, L=2)
        self.assertGreaterEqual(midpoint(value), 0.98 * midpoint(b))

    def test_at_least_the_symmetric_partition(self):
        alpha = RotationNumber.sqrt3m1()
        q, Q = alpha.q(6), alpha.q(6) + alpha.q(7)
        value, _ = bound_c(alpha, self.seq, "1/2", 6, L=3)
        symmetric = q * math.sqrt(midpoint(partition_sum(self.seq, -(Q // 2), Q, 3)))
        self.assertGreaterEqual(midpoint(value), symmetric * (1 - 1e-12))

    def test_explicit_offsets(self):
        alpha = RotationNumber.golden()
        value, offset = bound_c(alpha, self.seq, "1/2", 5, L=1, offsets=[-3])
        self.assertEqual(offset, -3)

        Q = alpha.q(5) + alpha.q(6)
        expected = alpha.q(5) * math.sqrt(midpoint(partition_sum(self.seq, -3, Q, 1)))
        self.assertAlmostEqual(midpoint(value), expected, delta=1e-12)


class TestCandidateOffsets(unittest.TestCase):
    def test_policies(self):
        np.testing.assert_array_equal(candidate_offsets(5, "full"), np.arange(-4, 1))
        np.testing.assert_array_equal(candidate_offsets(7, "symmetric"), [-3])
        np.testing.assert_array_equal(candidate_offsets(5, "auto"), np.arange(-4, 1))

        sampled = candidate_offsets(10**5, "sampled")
        self.assertIn(-(10**5 // 2), sampled)
        self.assertTrue((sampled <= 0).all() and (sampled > -(10**5)).all())
        self.assertLess(len(sampled), 10**5)

    def test_explicit_list_is_sorted_and_unique(self):
        np.testing.assert_array_equal(candidate_offsets(9, [-2, -5, -2]), [-5, -2])

    def test_errors(self):
        with self.assertRaises(ValueError):
            candidate_offsets(9, "everything")
        with self.assertRaises(ValueError):
            candidate_offsets(9, [])
        with self.assertRaises(ValueError):
            candidate_offsets(9, "outer")


class TestOrderStatistic(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.alpha = RotationNumber.golden()
        cls.seq = classical_sequence("1/2")

    def test_single_statistic_is_bound_c(self):
        for n in (4, 7):
            value = bound_order_stat(
                self.alpha, self.seq, "1/2", n, m=1, L=2, offsets="symmetric"
            )
            c_value, _ = bound_c(self.alpha, self.seq, "1/2", n, L=2, offsets="symmetric")
            self.assertEqual(value._mpi_, c_value._mpi_)

    def test_single_statistic_outer_is_bound_c_outer(self):
        value = bound_order_stat(self.alpha, self.seq, "1/2", 6, m=1, L=1, offsets="outer")
        c_value, start = bound_c(self.alpha, self.seq, "1/2", 6, L=1, offsets="outer")
        self.assertEqual(value._mpi_, c_value._mpi_)
        self.assertEqual(start, (self.alpha.q(6) + self.alpha.q(7)) // 2)

    def test_kth_never_exceeds_sum(self):
        for n in (5, 9):
            kth = bound_order_stat(self.alpha, self.seq, "1/2", n, m=3, statistic="kth")
            total = bound_order_stat(self.alpha, self.seq, "1/2", n, m=3, statistic="sum")
            self.assertLess(lower(kth), lower(total))

    def test_unknown_statistic(self):
        with self.assertRaises(ValueError):
            bound_order_stat(self.alpha, self.seq, "1/2", 4, statistic="median")

    def test_invalid_multiplicity(self):
        with self.assertRaises(InvalidOrderStatisticError):
            bound_order_stat(self.alpha, self.seq, "1/2", 4, m=0)

    def test_flat_trend(self):
        series = lower_bound_series(
            self.alpha, self.seq, "1/2", (10, 20), method="order-stat", m=2, offsets="symmetric"
        )
        self.assertEqual(series.method, "order-stat(2)")
        self.assertGreater(liminf_report(series, (10, 20)).trend_slope, -0.03)

    def test_outer_blocks_skip_the_origin(self):
        # blocks [3, 6] and [-6, -3]; their minima sit at the far ends
        value = outer_partition_sum(self.seq, 3, 4, 0, m=1)
        expected = midpoint(self.seq.length(6)) + midpoint(self.seq.length(-6))
        self.assertAlmostEqual(midpoint(value), expected, delta=1e-15)

        with self.assertRaises(ValueError):
            outer_partition_sum(self.seq, 0, 4, 0)


class TestOrderStatisticWithExceptions(unittest.TestCase):
    """l_{+-4^k} = 7^(-k) on the classical sequence of class 4/5, golden rotation, beta = delta."""

    @classmethod
    def setUpClass(cls):
        cls.alpha = RotationNumber.golden()
        cls.seq = perturbed_sequence(classical_sequence("4/5"), ExceptionRule.power(4, 7))
        cls.series = lower_bound_series(
            cls.alpha, cls.seq, "4/5", (8, 20), method="order-stat", m=2
        )

    def test_positive_without_downward_trend(self):
        summary = liminf_report(self.series, (8, 20))
        self.assertGreater(summary.infimum, 0)
        self.assertGreater(summary.trend_slope, -SLOPE_TOLERANCE)

    def test_outer_window_is_used(self):
        for row in self.series.rows:
            self.assertEqual(row.offset, row.N)
            self.assertEqual(row.m, 2)

    def test_next_to_the_window_constant(self):
        # two mirrored windows N_n..5N_n, each worth its second smallest length
        constant = reference_constants("4/5")["order_stat_constant"]
        for row in self.series.rows:
            self.assertTrue(0.995 < row.bound / (2**0.8 * constant) < 1.015, row.n)

    def test_central_tiling_decays_faster(self):
        central = lower_bound_series(
            self.alpha,
            self.seq,
            "4/5",
            (8, 20),
            method="order-stat",
            m=2,
            offsets="symmetric",
            statistic="sum",
        )
        self.assertLess(
            liminf_report(central, (8, 20)).trend_slope,
            liminf_report(self.series, (8, 20)).trend_slope,
        )


class TestHomogeneity(unittest.TestCase):
    """Scaling every length by a factor scales each estimator by the factor to the beta."""

    def test_scaled_sequence(self):
        alpha, factor = RotationNumber.golden(), 3
        perturbed = perturbed_sequence(classical_sequence("4/5"), ExceptionRule.power(4, 7))
        for seq in (classical_sequence("1/2"), perturbed):
            scaled = scaled_sequence(seq, factor)
            for beta in ("1/2", "4/5"):
                expected = factor ** float(sp.Rational(beta))
                pairs = [
                    (bound_b(alpha, scaled, beta, 9, L=2), bound_b(alpha, seq, beta, 9, L=2)),
                    (bound_c(alpha, scaled, beta, 9, L=2)[0], bound_c(alpha, seq, beta, 9, L=2)[0]),
                    (
                        bound_order_stat(alpha, scaled, beta, 9, L=1),
                        bound_order_stat(alpha, seq, beta, 9, L=1),
                    ),
                ]
                for found, base in pairs:
                    self.assertAlmostEqual(
                        midpoint(found) / midpoint(base) / expected, 1, delta=1e-12, msg=seq.name
                    )


class TestLowerBoundSeries(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.alpha = RotationNumber.sqrt3m1()
        cls.seq = classical_sequence("1/2")

    def test_rows_and_frame(self):
        series = lower_bound_series(self.alpha, self.seq, "1/2", (3, 8), method="c", L=1)
        frame = series.to_frame()

        self.assertEqual(series.method, "C")
        self.assertEqual(series.n_values, list(range(3, 9)))
        self.assertEqual(list(frame.columns), SERIES_COLUMNS)
        self.assertTrue((frame["direction"] == "lower").all())

        row = series.row(5)
        self.assertEqual(row.q, self.alpha.q(5))
        self.assertEqual(row.Q, self.alpha.q(5) + self.alpha.q(6))
        self.assertEqual(row.N, row.Q // 2)
        self.assertEqual(row.bound, lower(row.value))

    def test_parallel_rows_match(self):
        sequential = lower_bound_series(self.alpha, self.seq, "1/2", (3, 10), method="b", L=2)
        parallel = lower_bound_series(
            self.alpha, self.seq, "1/2", (3, 10), method="b", L=2, n_jobs=2
        )
        self.assertEqual(
            [r.value_mpi for r in sequential.rows], [r.value_mpi for r in parallel.rows]
        )

    def test_unknown_method_raises(self):
        with self.assertRaises(ValueError):
            lower_bound_series(self.alpha, self.seq, "1/2", (3, 5), method="d")


if __name__ == "__main__":
    unittest.main()
