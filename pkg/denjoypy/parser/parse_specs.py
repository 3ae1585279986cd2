"""
Grammars for the spec strings shared by the library and the command line: rotation numbers, gap
models, index windows and comma lists.
"""
import os
from typing import List, Optional

import pyparsing as pp
import sympy as sp

from denjoypy.classes.gap_sequence import ExceptionRule, GapSequence
from denjoypy.classes.rotation import RotationNumber
from denjoypy.exceptions.exceptions import SpecParsingError
from denjoypy.parser.constants import (
    ALPHA_GRAMMAR,
    ALPHA_KINDS,
    BOUND_METHODS,
    GAP_MODELS,
    MODEL_GRAMMAR,
    WINDOW_GRAMMAR,
)
from denjoypy.parser.file_loaders import load_gap_table
from denjoypy.parser.validation import find_typos_and_guesses, suggest_spec, validate_window_bounds
from denjoypy.shared.utilities import IndexWindow
from denjoypy.solvers.continued_fractions import quadratic_rotation
from denjoypy.solvers.gap_lengths import (
    classical_sequence,
    logcubed_sequence,
    perturbed_sequence,
    table_sequence,
)

COLON, COMMA, SEMI = map(pp.Suppress, ":,;")
POSITIVE = pp.Regex(r"[1-9]\d*").set_parse_action(lambda t: int(t[0])).set_name("positive integer")
NATURAL = pp.Regex(r"\d+").set_parse_action(lambda t: int(t[0])).set_name("integer")
SIGNED = pp.Regex(r"[+-]?\d+").set_parse_action(lambda t: int(t[0])).set_name("signed integer")
DELTA = pp.Regex(r"\d*\.?\d+(/\d+)?").set_name("delta")


def _comma_list(element: pp.ParserElement) -> pp.ParserElement:
    return pp.Group(element + pp.ZeroOrMore(COMMA + element))


def build_alpha_grammar() -> pp.ParserElement:
    preset = (pp.Keyword("golden") | pp.Keyword("sqrt3m1"))("kind")
    quad = (
        pp.Keyword("quad")("kind")
        + COLON
        + pp.Group(SIGNED + COMMA + SIGNED + COMMA + SIGNED + COMMA + SIGNED)("args")
    )
    cf = pp.Keyword("cf")("kind") + COLON + _comma_list(POSITIVE)("quotients")
    cfonce = (
        pp.Keyword("cfonce")("kind")
        + COLON
        + _comma_list(POSITIVE)("quotients")
        + SEMI
        + pp.Suppress(pp.Keyword("then"))
        + COLON
        + POSITIVE("then")
    )
    square_growth = pp.Keyword("squaregrowth")("kind") + COLON + POSITIVE("q1")

    return (preset | quad | cfonce | cf | square_growth) + pp.StringEnd()


def build_model_grammar() -> pp.ParserElement:
    classical = pp.Keyword("classical")("base") + COLON + DELTA("delta")
    power_rule = pp.Regex(r"pow(?P<index_base>\d+)to(?P<value_base>\d+)")

    perturbed = pp.Keyword("perturbed")("kind") + COLON + classical + SEMI + power_rule
    logcubed = pp.Keyword("logcubed")("kind")
    table = pp.Keyword("table")("kind") + COLON + pp.Regex(r".+")("path")

    return (perturbed | table | logcubed | pp.Group(classical)("classical")) + pp.StringEnd()


def build_window_grammar() -> pp.ParserElement:
    span = pp.Group(NATURAL("start") + pp.Suppress("..") + NATURAL("stop"))
    single = pp.Group(NATURAL("start"))
    return _comma_list(span | single)("parts") + pp.StringEnd()


ALPHA_PARSER = build_alpha_grammar()
MODEL_PARSER = build_model_grammar()
WINDOW_PARSER = build_window_grammar()
NUMBER_LIST_PARSER = _comma_list(DELTA)("values") + pp.StringEnd()


def parse_alpha(spec: str) -> RotationNumber:
    """
    Build a rotation number from its spec string.

    Parameters
    ----------
    spec : str
        One of ``golden``, ``sqrt3m1``, ``quad:A,B,C,D``, ``cf:a1,a2,...``,
        ``cfonce:a1,...,ak;then:m`` or ``squaregrowth:q1``.

    Returns
    -------
    RotationNumber

    Raises
    ------
    SpecParsingError
        If the string does not follow the grammar.
    IrrationalityError
        If a ``quad`` spec describes a rational number.
    """
    spec = spec.strip()
    try:
        parsed = ALPHA_PARSER.parse_string(spec)
    except pp.ParseException:
        best_guess = suggest_spec(spec, ALPHA_KINDS.values())
        raise SpecParsingError("alpha", spec, ALPHA_GRAMMAR, best_guess)

    kind = parsed["kind"]
    if kind == ALPHA_KINDS.GOLDEN.value:
        return RotationNumber.golden()
    if kind == ALPHA_KINDS.SQRT3M1.value:
        return RotationNumber.sqrt3m1()
    if kind == ALPHA_KINDS.QUAD.value:
        return quadratic_rotation(*parsed["args"])
    if kind == ALPHA_KINDS.CF.value:
        return RotationNumber.periodic(list(parsed["quotients"]))
    if kind == ALPHA_KINDS.CFONCE.value:
        return RotationNumber.from_quotients(list(parsed["quotients"]), then=parsed["then"])
    return RotationNumber.square_growth(parsed["q1"])


def parse_model(spec: str, base_dir: Optional[str] = None) -> GapSequence:
    """
    Build a gap sequence from its spec string.

    Parameters
    ----------
    spec : str
        One of ``classical:DELTA``, ``perturbed:classical:DELTA;pow<B>to<R>``, ``logcubed`` or
        ``table:FILE``.
    base_dir : str, optional
        Directory against which relative table paths are resolved.

    Returns
    -------
    GapSequence
    """
    spec = spec.strip()
    try:
        parsed = MODEL_PARSER.parse_string(spec)
    except pp.ParseException:
        best_guess = suggest_spec(spec, GAP_MODELS.values())
        raise SpecParsingError("model", spec, MODEL_GRAMMAR, best_guess)

    if "classical" in parsed:
        return classical_sequence(parsed["classical"]["delta"])

    kind = parsed["kind"]
    if kind == GAP_MODELS.LOGCUBED.value:
        return logcubed_sequence()

    if kind == GAP_MODELS.PERTURBED.value:
        rule = ExceptionRule.power(int(parsed["index_base"]), int(parsed["value_base"]))
        return perturbed_sequence(classical_sequence(parsed["delta"]), rule)

    path = parsed["path"].strip()
    if base_dir is not None and not os.path.isabs(path):
        path = os.path.join(base_dir, path)
    entries, tail_delta = load_gap_table(path)
    return table_sequence(entries, tail_delta)


def parse_window(spec: str, minimum: int = 1) -> IndexWindow:
    """
    Parse ``A..B`` or a single index ``N`` into an inclusive window.
    """
    parts = _window_parts(str(spec))
    if len(parts) != 1:
        raise SpecParsingError("window", spec, WINDOW_GRAMMAR, f"{parts[0][0]}..{parts[-1][1]}")

    start, stop = parts[0]
    validate_window_bounds(start, stop, minimum)
    return IndexWindow(start, stop)


def parse_index_list(spec: str, minimum: int = 1) -> List[int]:
    """
    Parse a comma list of indices and windows, ``2..5,8,10..12``, into sorted distinct indices.
    """
    indices = set()
    for start, stop in _window_parts(str(spec)):
        validate_window_bounds(start, stop, minimum)
        indices.update(range(start, stop + 1))
    return sorted(indices)


def _window_parts(spec: str) -> List[tuple]:
    spec = spec.strip()
    try:
        parsed = WINDOW_PARSER.parse_string(spec)
    except pp.ParseException:
        raise SpecParsingError("window", spec, WINDOW_GRAMMAR)

    parts = []
    for part in parsed["parts"]:
        start = part["start"]
        stop = part["stop"] if "stop" in part else start
        parts.append((start, stop))
    return parts


def parse_number_list(spec: str) -> List[sp.Rational]:
    """
    Parse a comma list of non-negative numbers, decimal or fractional (``0.3,1/2``), exactly.
    """
    spec = str(spec).strip()
    try:
        parsed = NUMBER_LIST_PARSER.parse_string(spec)
    except pp.ParseException:
        raise SpecParsingError("number list", spec, "X | X,Y,...  with X decimal or P/Q")
    return [sp.Rational(v) for v in parsed["values"]]


def parse_methods(spec: str) -> List[str]:
    """
    Parse a comma list of bound methods (``a,b``), keeping the order and dropping repeats.
    """
    methods = [m.strip().lower() for m in str(spec).split(",") if m.strip()]
    unknown = [m for m in methods if m not in BOUND_METHODS]
    if unknown or not methods:
        best_guess, _ = find_typos_and_guesses(unknown, BOUND_METHODS.values())
        raise SpecParsingError("method", spec, " | ".join(BOUND_METHODS.values()), best_guess)
    return list(dict.fromkeys(methods))
