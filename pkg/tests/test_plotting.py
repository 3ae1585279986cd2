import unittest

import matplotlib

matplotlib.use("Agg")

from matplotlib import pyplot as plt  # noqa: E402

from denjoypy.classes.rotation import RotationNumber  # noqa: E402
from denjoypy.oracle import TruncatedCircle, recurrence_rate  # noqa: E402
from denjoypy.plotting import (  # noqa: E402
    plot_bound_series,
    plot_orbit_gaps,
    plot_recurrence_curves,
    prepare_gridspec_figure,
)
from denjoypy.solvers.bounds import lower_bound_series  # noqa: E402
from denjoypy.solvers.gap_lengths import classical_sequence  # noqa: E402
from denjoypy.solvers.threegap import analytic_gap_structure, forward_gap_structure  # noqa: E402


class TestUtilities(unittest.TestCase):
    def test_prepare_gridspec_figure_square(self):
        gs, locs = prepare_gridspec_figure(n_cols=3, n_plots=9)
        self.assertTrue(len(locs) == 9)

    def test_prepare_gridspec_figure_tall(self):
        gs, locs = prepare_gridspec_figure(n_cols=2, n_plots=9)
        self.assertTrue(len(locs) == 9)
        self.assertEqual(locs[-1][0], slice(8, 10, None))
        self.assertEqual(locs[-1][1], slice(1, 3, None))

    def test_prepare_gridspec_figure_wide(self):
        gs, locs = prepare_gridspec_figure(n_cols=4, n_plots=9)
        self.assertTrue(len(locs) == 9)
        self.assertEqual(locs[-1][0], slice(4, 6, None))
        self.assertEqual(locs[-1][1], slice(3, 5, None))


class TestPlotOrbitGaps(unittest.TestCase):
    def test_two_panels(self):
        report = forward_gap_structure(RotationNumber.sqrt3m1(), 25)
        fig = plot_orbit_gaps(report)

        self.assertEqual(len(fig.axes), 2)
        self.assertEqual(len(fig.axes[1].patches), 26)
        plt.close()

    def test_needs_enumerated_orbit(self):
        with self.assertRaises(ValueError):
            plot_orbit_gaps(analytic_gap_structure(RotationNumber.golden(), 6))
        plt.close()


class TestPlotBoundSeries(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        alpha, seq = RotationNumber.golden(), classical_sequence("1/2")
        cls.series = [
            lower_bound_series(alpha, seq, "1/2", (5, 12), method=method, L=1)
            for method in ("a", "b", "c", "order-stat")
        ]

    def test_single_series(self):
        fig = plot_bound_series(self.series[0], reference={"limit": 0.5048})

        self.assertEqual(len(fig.axes), 1)
        self.assertEqual(fig.axes[0].get_title(), "A, beta = 0.5")
        plt.close()

    def test_one_panel_per_series(self):
        fig = plot_bound_series(self.series, n_cols=3)
        self.assertEqual(len(fig.axes), 4)
        plt.close()

    def test_empty_raises(self):
        with self.assertRaises(ValueError):
            plot_bound_series([])


class TestPlotRecurrenceCurves(unittest.TestCase):
    def test_log_axes(self):
        alpha = RotationNumber.golden().to_float()
        circle = TruncatedCircle(classical_sequence("1/2"), 300, alpha)
        fig = plot_recurrence_curves(recurrence_rate(circle, 0.3, 0.5, 200))

        self.assertEqual(len(fig.axes), 1)
        self.assertEqual(fig.axes[0].get_xscale(), "log")
        plt.close()


if __name__ == "__main__":
    unittest.main()
