from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import sympy as sp
from mpmath import iv

from denjoypy.exceptions.exceptions import DivergentZetaError
from denjoypy.parser.constants import DEFAULT_PRECISION, ZETA_TERMS
from denjoypy.shared.intervals import (
    hull,
    interval_power,
    lower_mpf,
    to_interval,
    upper_mpf,
    working_precision,
)
from denjoypy.shared.utilities import as_rational

Exponent = Union[int, float, str, sp.Rational]


@dataclass(frozen=True)
class ZetaValue:
    s: sp.Rational
    value: "iv.mpf"
    terms_used: int


def power_tail(a, s) -> "iv.mpf":
    """
    Interval for the integral of x^(-s) over [a, infinity), that is a^(1-s) / (s - 1).
    """
    if _is_integer(s):
        k = int(s)
        return iv.mpf(1) / ((k - 1) * iv.mpf(a) ** (k - 1))

    s_iv = to_interval(s)
    return interval_power(to_interval(a), 1 - s_iv) / (s_iv - 1)


def power_sum(start: int, stop: int, s) -> "iv.mpf":
    """Interval for the sum of m^(-s) over start <= m <= stop."""
    exponent = -int(s) if _is_integer(s) else -to_interval(s)
    total = iv.mpf(0)
    for m in range(start, stop + 1):
        total += iv.mpf(m) ** exponent
    return total


def bracketed_power_tail(start: int, s, terms: int) -> "iv.mpf":
    """
    Interval for the sum of m^(-s) over m >= start.

    The first ``terms`` summands are added directly; the remainder R beyond M = start + terms - 1
    satisfies integral_{M+1}^inf x^(-s) dx <= R <= integral_M^inf x^(-s) dx.
    """
    last = start + terms - 1
    partial = power_sum(start, last, s)
    remainder = hull(lower_mpf(power_tail(last + 1, s)), upper_mpf(power_tail(last, s)))
    return partial + remainder


def _is_integer(s) -> bool:
    return isinstance(s, sp.Rational) and s.q == 1


@lru_cache(maxsize=64)
def _zeta_cached(s: sp.Rational, terms: int, precision: int) -> ZetaValue:
    with working_precision(precision):
        value = iv.mpf(1) + bracketed_power_tail(2, s, terms - 1)
    return ZetaValue(s=s, value=value, terms_used=terms)


def zeta_interval(
    s: Exponent, terms: int = ZETA_TERMS, precision: int = DEFAULT_PRECISION
) -> ZetaValue:
    """
    Certified enclosure of the Riemann zeta function at a real argument s > 1.

    Parameters
    ----------
    s : int, float, str or sympy.Rational
        The argument; decimal strings and floats are read exactly as decimals.
    terms : int, optional
        Number of summands added explicitly, at least 10. The remaining tail is bracketed by the
        integrals of x^(-s) from terms + 1 and from terms to infinity.
    precision : int, optional
        Working precision in bits.

    Returns
    -------
    ZetaValue

    Raises
    ------
    DivergentZetaError
        If s <= 1 + 1e-6.
    """
    s = as_rational(s)
    if s <= 1 + sp.Rational(1, 10**6):
        raise DivergentZetaError(s)
    if terms < 10:
        raise ValueError(f"zeta_interval needs at least 10 terms, found {terms}")

    return _zeta_cached(s, int(terms), int(precision))
