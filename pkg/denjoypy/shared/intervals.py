"""
Helpers around mpmath's interval context.

All certified quantities in the package are ``iv.mpf`` intervals. Lower bounds are read from the
lower endpoint and upper bounds from the upper endpoint, so the helpers here always keep the
direction of rounding explicit.
"""
import functools
import math
from contextlib import contextmanager
from typing import Iterable, Iterator, Tuple, Union

import sympy as sp
from mpmath import iv, mp
from mpmath.libmp import round_ceiling, round_floor, to_float

IntervalLike = Union[int, float, str, sp.Rational, Tuple, "iv.mpf"]

_NUDGE = mp.mpf(2) ** -45


@contextmanager
def working_precision(precision: int) -> Iterator[None]:
    """
    Set the precision of the interval context to ``precision`` bits inside the block.

    The interval context has no ``workprec`` of its own, so the previous precision is saved and
    restored here.
    """
    saved = iv.prec
    iv.prec = int(precision)
    try:
        yield
    finally:
        iv.prec = saved


def with_working_precision(method):
    """
    Run a method under ``working_precision(self.precision)``.
    """

    @functools.wraps(method)
    def wrapper(self, *args, **kwargs):
        with working_precision(self.precision):
            return method(self, *args, **kwargs)

    return wrapper


def to_interval(x: IntervalLike) -> "iv.mpf":
    """
    Convert a number to an interval enclosing it.

    Parameters
    ----------
    x : int, float, str, sympy.Rational, tuple or iv.mpf
        Integers and floats convert exactly when representable, decimal strings and rationals are
        rounded outward, and a tuple ``(lo, hi)`` builds the hull of its two endpoints.

    Returns
    -------
    iv.mpf
    """
    if isinstance(x, iv.mpf):
        return x
    if isinstance(x, tuple):
        lo, hi = x
        return iv.mpf((to_interval(lo), to_interval(hi)))
    if isinstance(x, sp.Rational):
        if x.q == 1:
            return iv.mpf(int(x.p))
        return iv.mpf(int(x.p)) / int(x.q)
    if isinstance(x, sp.Basic):
        return iv.mpf(str(sp.Rational(x)))
    return iv.mpf(x)


def endpoints(x: "iv.mpf") -> Tuple[mp.mpf, mp.mpf]:
    lo, hi = x._mpi_
    return mp.make_mpf(lo), mp.make_mpf(hi)


def lower_mpf(x: "iv.mpf") -> mp.mpf:
    return mp.make_mpf(x._mpi_[0])


def upper_mpf(x: "iv.mpf") -> mp.mpf:
    return mp.make_mpf(x._mpi_[1])


def lower(x: "iv.mpf") -> float:
    """Lower endpoint rounded toward minus infinity."""
    return to_float(x._mpi_[0], rnd=round_floor)


def upper(x: "iv.mpf") -> float:
    """Upper endpoint rounded toward plus infinity."""
    return to_float(x._mpi_[1], rnd=round_ceiling)


def midpoint(x: "iv.mpf") -> float:
    lo, hi = endpoints(x)
    return float((lo + hi) / 2)


def width(x: "iv.mpf") -> mp.mpf:
    lo, hi = endpoints(x)
    return hi - lo


def hull(lo: mp.mpf, hi: mp.mpf) -> "iv.mpf":
    return iv.mpf((lo, hi))


def interval_min(values: Iterable["iv.mpf"]) -> "iv.mpf":
    """
    Interval enclosing the minimum of a collection of intervals.
    """
    values = list(values)
    lo = min(lower_mpf(v) for v in values)
    hi = min(upper_mpf(v) for v in values)
    return hull(lo, hi)


def interval_max(values: Iterable["iv.mpf"]) -> "iv.mpf":
    values = list(values)
    lo = max(lower_mpf(v) for v in values)
    hi = max(upper_mpf(v) for v in values)
    return hull(lo, hi)


def interval_sum(values: Iterable["iv.mpf"]) -> "iv.mpf":
    total = iv.mpf(0)
    for v in values:
        total = total + v
    return total


def interval_power(x: "iv.mpf", exponent: IntervalLike) -> "iv.mpf":
    """
    Raise a positive interval to a positive exponent with outward rounding.

    Integer exponents use repeated multiplication, every other exponent goes through exp and log.
    """
    if isinstance(exponent, (int, sp.Integer)) and not isinstance(exponent, bool):
        return x ** int(exponent)
    if isinstance(exponent, sp.Rational) and exponent.q == 1:
        return x ** int(exponent.p)
    return x ** to_interval(exponent)


def contains(x: "iv.mpf", value: IntervalLike) -> bool:
    """True when ``value`` (an interval or number) lies entirely inside ``x``."""
    lo, hi = endpoints(x)
    v_lo, v_hi = endpoints(to_interval(value))
    return lo <= v_lo and v_hi <= hi


def certainly_less(x: "iv.mpf", y: "iv.mpf") -> bool:
    return upper_mpf(x) < lower_mpf(y)


def overlaps(x: "iv.mpf", y: "iv.mpf") -> bool:
    return not (certainly_less(x, y) or certainly_less(y, x))


def log_lower(x: "iv.mpf") -> float:
    """
    Natural log of the lower endpoint, for trend diagnostics on values that may leave the double
    range. Not a certified quantity.
    """
    lo = lower_mpf(x)
    if lo <= 0:
        return -math.inf
    return float(mp.log(lo))


def directed_value(x: "iv.mpf", direction: str) -> Union[float, str]:
    """
    Endpoint selected by ``direction`` ("lower" or "upper"), rounded in that direction.

    Returns a float when the endpoint lies in the double range and a decimal string otherwise; the
    string is rounded so that it never crosses the exact endpoint.
    """
    if direction == "lower":
        raw, rounding, sign = x._mpi_[0], round_floor, -1
    else:
        raw, rounding, sign = x._mpi_[1], round_ceiling, 1

    value = to_float(raw, rnd=rounding)
    exact = mp.make_mpf(raw)
    if exact == 0 or (value != 0.0 and math.isfinite(value)):
        return value

    # moved outward by a relative 2^-45 so that printing 15 digits cannot cross the endpoint
    return mp.nstr(exact + sign * abs(exact) * _NUDGE, 15)


def format_endpoint(x: "iv.mpf", direction: str) -> str:
    value = directed_value(x, direction)
    if isinstance(value, float):
        return repr(value)
    return value
