import math
import os
import unittest
from pathlib import Path

import sympy as sp

from denjoypy.exceptions.exceptions import (
    ConfigFileError,
    EmptyWindowError,
    GapTableError,
    IrrationalityError,
    SpecParsingError,
)
from denjoypy.parser.file_loaders import load_config, load_gap_table, parse_config_text
from denjoypy.parser.parse_specs import (
    parse_alpha,
    parse_index_list,
    parse_methods,
    parse_model,
    parse_number_list,
    parse_window,
)
from denjoypy.parser.validation import find_typos_and_guesses, jaccard_distance, suggest_spec
from denjoypy.shared.intervals import midpoint
from denjoypy.shared.utilities import IndexWindow

ROOT = Path(__file__).parent.absolute()
TABLES = os.path.join(ROOT, "Test Gap Tables")
CONFIGS = os.path.join(ROOT, "Test Configs")


class TestParseAlpha(unittest.TestCase):
    def test_presets(self):
        self.assertEqual(parse_alpha("golden").quotients(4), [1, 1, 1, 1])
        self.assertEqual(parse_alpha(" sqrt3m1 ").quotients(4), [1, 2, 1, 2])

    def test_quadratic(self):
        alpha = parse_alpha("quad:-1,1,2,5")
        self.assertAlmostEqual(alpha.to_float(), (math.sqrt(5) - 1) / 2, places=14)

    def test_continued_fractions(self):
        self.assertEqual(parse_alpha("cf:1,3").quotients(5), [1, 3, 1, 3, 1])
        self.assertEqual(parse_alpha("cfonce:4,2;then:1").quotients(5), [4, 2, 1, 1, 1])
        self.assertEqual(parse_alpha("squaregrowth:2").q(3), 27)

    def test_rational_quad_raises(self):
        with self.assertRaises(IrrationalityError):
            parse_alpha("quad:1,1,2,4")

    def test_typo_is_suggested(self):
        with self.assertRaises(SpecParsingError) as error:
            parse_alpha("goldne")
        self.assertEqual(error.exception.best_guess, "golden")
        self.assertIn("Did you mean 'golden'", str(error.exception))

    def test_malformed(self):
        for spec in ("cf:", "cf:1,0", "quad:1,2", "squaregrowth:0", ""):
            with self.assertRaises(SpecParsingError):
                parse_alpha(spec)


class TestParseModel(unittest.TestCase):
    def test_classical(self):
        seq = parse_model("classical:1/3")
        self.assertEqual(seq.delta, sp.Rational(1, 3))
        self.assertEqual(parse_model("classical:0.5").delta, sp.Rational(1, 2))

    def test_perturbed(self):
        seq = parse_model("perturbed:classical:0.5;pow2to3")
        self.assertTrue(seq.is_exception(8))
        self.assertFalse(seq.is_exception(3))

    def test_logcubed(self):
        self.assertIsNone(parse_model("logcubed").delta)

    def test_table(self):
        seq = parse_model(f"table:{os.path.join(TABLES, 'five_gaps.csv')}")
        self.assertAlmostEqual(midpoint(seq.length(0)) / midpoint(seq.length(2)), 5.0, delta=1e-12)

    def test_table_relative_to_base_dir(self):
        seq = parse_model("table:five_gaps.csv", base_dir=TABLES)
        self.assertEqual(seq.model, "table")
        self.assertEqual(seq.delta, sp.Rational(1, 2))

    def test_typo_is_suggested(self):
        with self.assertRaises(SpecParsingError) as error:
            parse_model("clasical:0.5")
        self.assertEqual(error.exception.best_guess, "classical:0.5")


class TestWindowsAndLists(unittest.TestCase):
    def test_window(self):
        self.assertEqual(parse_window("10..30"), IndexWindow(10, 30))
        self.assertEqual(parse_window("7"), IndexWindow(7, 7))
        self.assertEqual(parse_window("0..3", minimum=0), IndexWindow(0, 3))

    def test_window_errors(self):
        with self.assertRaises(EmptyWindowError):
            parse_window("5..2")
        with self.assertRaises(ValueError):
            parse_window("0..3")
        with self.assertRaises(SpecParsingError):
            parse_window("a..b")
        with self.assertRaises(SpecParsingError):
            parse_window("1..2,5")

    def test_index_list(self):
        self.assertEqual(parse_index_list("2..4,8,3,10..11"), [2, 3, 4, 8, 10, 11])

    def test_number_list(self):
        self.assertEqual(parse_number_list("0.3,1/2"), [sp.Rational(3, 10), sp.Rational(1, 2)])
        with self.assertRaises(SpecParsingError):
            parse_number_list("-1")

    def test_methods(self):
        self.assertEqual(parse_methods("a, B,a,order-stat"), ["a", "b", "order-stat"])
        with self.assertRaises(SpecParsingError):
            parse_methods("a,d")
        with self.assertRaises(SpecParsingError):
            parse_methods("")


class TestSuggestions(unittest.TestCase):
    def test_jaccard_distance(self):
        self.assertEqual(jaccard_distance("cf", "cfonce"), 2 / 5)
        self.assertEqual(jaccard_distance("", ""), 0.0)

    def test_find_typos_and_guesses(self):
        best_guess, maybe_typo = find_typos_and_guesses(["logcubd"], ["classical", "logcubed"])
        self.assertEqual(best_guess, "logcubed")
        self.assertEqual(maybe_typo, "logcubd")

        self.assertEqual(find_typos_and_guesses(["xyz"], ["golden"]), (None, None))

    def test_suggest_spec(self):
        self.assertEqual(suggest_spec("sqrt3m", ["golden", "sqrt3m1"]), "sqrt3m1")
        self.assertIsNone(suggest_spec("golden", ["golden", "sqrt3m1"]))


class TestGapTables(unittest.TestCase):
    def test_load(self):
        entries, tail_delta = load_gap_table(os.path.join(TABLES, "five_gaps.csv"))
        self.assertEqual(sorted(entries), [-2, -1, 0, 1, 2])
        self.assertEqual(entries[1], 0.3)
        self.assertEqual(tail_delta, sp.Rational(1, 2))

    def test_bad_tables(self):
        for name in ("missing_index.csv", "bad_header.csv", "does_not_exist.csv"):
            with self.assertRaises(GapTableError):
                load_gap_table(os.path.join(TABLES, name))


class TestConfigFiles(unittest.TestCase):
    def test_parse_text(self):
        values = parse_config_text("alpha = golden  # preset\n\nn-jobs=2\nbeta=0.3,1/2\n")
        self.assertEqual(values, {"alpha": "golden", "n_jobs": "2", "beta": "0.3,1/2"})

    def test_load(self):
        values = load_config(os.path.join(CONFIGS, "threegap_sqrt3m1.cfg"))
        self.assertEqual(values, {"alpha": "sqrt3m1", "k": "25"})

    def test_broken_line(self):
        with self.assertRaises(ConfigFileError) as error:
            load_config(os.path.join(CONFIGS, "broken.cfg"))
        self.assertEqual(error.exception.line_number, 2)


if __name__ == "__main__":
    unittest.main()
