import unittest

from denjoypy.classes.rotation import RotationNumber
from denjoypy.exceptions.exceptions import EnumerationBudgetError, PartialTableWarning
from denjoypy.solvers.threegap import (
    analytic_gap_structure,
    compare_forms,
    forward_gap_structure,
    max_gap_within_norm,
    rotation_invariant,
    symmetric_gap_structure,
    symmetric_max_gap,
    threshold_check,
)


class TestForwardGapStructure(unittest.TestCase):
    def test_sqrt3m1_first_25_iterates(self):
        report = forward_gap_structure(RotationNumber.sqrt3m1(), 25)
        long_gap, short_gap = report.classes

        self.assertEqual(report.multiplicities, [15, 11])
        self.assertAlmostEqual(float(long_gap.length), 0.052559, delta=1e-6)
        self.assertAlmostEqual(float(short_gap.length), 0.019238, delta=1e-6)
        self.assertTrue(report.total_length().contains(1))
        self.assertEqual(report.reference_n, 4)

    def test_report_lists_both_extreme_gaps(self):
        summary = forward_gap_structure(RotationNumber.sqrt3m1(), 25).to_dict()

        self.assertEqual(summary["max_gap"]["multiplicity"], 15)
        self.assertEqual(summary["min_gap"]["multiplicity"], 11)
        self.assertAlmostEqual(summary["min_gap"]["length"], 0.019238, delta=1e-6)

    def test_golden_two_lengths(self):
        report = forward_gap_structure(RotationNumber.golden(), 12)
        self.assertEqual(report.multiplicities, [8, 5])

    def test_two_lengths_at_every_convergent(self):
        presets = (RotationNumber.golden(), RotationNumber.sqrt3m1(), RotationNumber.periodic([2]))
        for alpha in presets:
            for n in range(2, 11):
                K = alpha.q(n) + alpha.q(n + 1) - 1
                report = forward_gap_structure(alpha, K)
                self.assertEqual(report.multiplicities, [alpha.q(n + 1), alpha.q(n)])
                self.assertTrue(
                    report.max_gap.length.lo <= alpha.convergent(n).theta.hi
                    and alpha.convergent(n).theta.lo <= report.max_gap.length.hi
                )

    def test_at_most_three_lengths(self):
        alpha = RotationNumber.sqrt3m1()
        for K in range(1, 60):
            report = forward_gap_structure(alpha, K)
            self.assertLessEqual(len(report.classes), 3)
            self.assertEqual(sum(report.multiplicities), K + 1)
            self.assertTrue(report.total_length().contains(1))

    def test_plot_frame(self):
        report = forward_gap_structure(RotationNumber.golden(), 12)
        frame = report.plot_frame()

        self.assertEqual(len(frame), 13)
        self.assertEqual(int(frame["t"].iloc[0]), 0)
        self.assertAlmostEqual(frame["gap_length"].sum(), 1.0, places=9)
        self.assertTrue((frame["position"].diff().dropna() > 0).all())

    def test_budget(self):
        with self.assertRaises(EnumerationBudgetError):
            forward_gap_structure(RotationNumber.golden(), 10**6)
        with self.assertRaises(ValueError):
            forward_gap_structure(RotationNumber.golden(), 0)


class TestSymmetricGapStructure(unittest.TestCase):
    def test_threshold_orbit_golden(self):
        alpha = RotationNumber.golden()
        report = symmetric_gap_structure(alpha, 6)

        self.assertEqual(report.n_points, 13)
        self.assertEqual(report.reference_n, 4)
        self.assertIsNone(report.anomalous)
        self.assertTrue(report.max_gap.length.hi <= alpha.convergent(4).theta.hi)

    def test_even_block_length_has_one_odd_gap(self):
        # Q_3 = 3 + 5 = 8 is even, so |t| <= N_3 = 4 holds one point more than the two-length orbit
        report = symmetric_gap_structure(RotationNumber.golden(), 4)

        self.assertEqual(len(report.classes), 3)
        self.assertIsNotNone(report.anomalous)
        self.assertEqual(report.anomalous.multiplicity, 1)
        self.assertNotIn(abs(report.anomalous.difference), (3, 5))

    def test_max_gap(self):
        alpha = RotationNumber.sqrt3m1()
        self.assertTrue(symmetric_max_gap(alpha, 13).hi <= alpha.convergent(4).theta.hi)

    def test_threshold_lemma_both_directions(self):
        alpha = RotationNumber.golden()
        self.assertTrue(max_gap_within_norm(alpha, 6, 4))
        self.assertFalse(max_gap_within_norm(alpha, 5, 4))

        alpha = RotationNumber.sqrt3m1()
        self.assertTrue(max_gap_within_norm(alpha, 13, 4))
        self.assertFalse(max_gap_within_norm(alpha, 12, 4))

    def test_rotation_invariant(self):
        for N in (3, 4, 6, 20):
            self.assertTrue(rotation_invariant(RotationNumber.sqrt3m1(), N))

    def test_negative_extent_raises(self):
        with self.assertRaises(ValueError):
            symmetric_gap_structure(RotationNumber.golden(), -1)


class TestThresholdCheck(unittest.TestCase):
    def test_presets(self):
        cases = [
            (RotationNumber.golden(), (2, 8)),
            (RotationNumber.sqrt3m1(), (2, 7)),
            (RotationNumber.periodic([2]), (2, 8)),
        ]
        for alpha, window in cases:
            frame = threshold_check(alpha, window)
            self.assertEqual(frame["n"].tolist(), list(range(window[0], window[1] + 1)))
            self.assertTrue(frame["holds_at_N"].all())
            self.assertTrue(frame["fails_below_N"].all())

    def test_partial_table_warns(self):
        alpha = RotationNumber.periodic([50])
        with self.assertWarns(PartialTableWarning):
            frame = threshold_check(alpha, (3, 4))
        self.assertEqual(len(frame), 0)


class TestAnalyticGapStructure(unittest.TestCase):
    def test_matches_enumeration(self):
        alpha = RotationNumber.sqrt3m1()
        analytic = analytic_gap_structure(alpha, 4)
        enumerated = forward_gap_structure(alpha, 25)

        self.assertTrue(analytic.analytic)
        self.assertEqual(analytic.t_max, 25)
        self.assertEqual(analytic.multiplicities, enumerated.multiplicities)
        for a, b in zip(analytic.classes, enumerated.classes):
            self.assertTrue(a.length.lo <= b.length.hi and b.length.lo <= a.length.hi)

    def test_deep_index_without_enumeration(self):
        alpha = RotationNumber.golden()
        report = analytic_gap_structure(alpha, 60)
        self.assertEqual(report.multiplicities, [alpha.q(61), alpha.q(60)])

    def test_plot_frame_needs_orbit(self):
        with self.assertRaises(ValueError):
            analytic_gap_structure(RotationNumber.golden(), 4).plot_frame()


class TestCompareForms(unittest.TestCase):
    def test_sign(self):
        alpha = RotationNumber.golden()
        # alpha - (2 alpha - 1) = 1 - alpha > 0
        self.assertEqual(compare_forms(alpha, (1, 0), (2, 1)), 1)
        self.assertEqual(compare_forms(alpha, (2, 1), (1, 0)), -1)
        self.assertEqual(compare_forms(alpha, (3, 1), (3, 1)), 0)


if __name__ == "__main__":
    unittest.main()
