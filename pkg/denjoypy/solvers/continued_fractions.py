import math
from dataclasses import dataclass, field
from typing import List, Tuple

import sympy as sp
from sympy.ntheory.continued_fraction import continued_fraction_periodic

from denjoypy.classes.rational_interval import RationalInterval
from denjoypy.classes.rotation import Convergent, PeriodicQuotients, RotationNumber
from denjoypy.exceptions.exceptions import IrrationalityError
from denjoypy.shared.utilities import IndexWindow


@dataclass(frozen=True)
class DiophantineEstimate:
    """
    Finite-window estimate of the Diophantine class nu from the growth of the denominators.

    ``trace`` lists (n, ln q_{n+1} / ln q_n) for every n of the window; ``nu_hat`` is their maximum.
    """

    nu_hat: float
    window: IndexWindow
    trace: List[Tuple[int, float]] = field(default_factory=list)
    label: str = "finite-window estimate of the Diophantine class"

    def to_dict(self) -> dict:
        return {
            "nu_hat": self.nu_hat,
            "window": str(self.window),
            "trace": [{"n": n, "ratio": r} for n, r in self.trace],
            "label": self.label,
        }


def convergents(alpha: RotationNumber, depth: int) -> List[Convergent]:
    """
    The convergents 1..depth of alpha.

    Parameters
    ----------
    alpha : RotationNumber
    depth : int
        Number of convergents, at least 1. The quotient stream must supply depth + 2 terms.

    Returns
    -------
    list of Convergent

    Raises
    ------
    InsufficientExpansionError
        If the stream ends before depth + 2 terms.
    """
    if depth < 1:
        raise ValueError(f"depth must be at least 1, found {depth}")

    alpha.extend(depth + 2)
    return [alpha.convergent(n) for n in range(1, depth + 1)]


def norm_q_alpha(alpha: RotationNumber, n: int) -> RationalInterval:
    """Rational interval certified to contain ||q_n alpha||."""
    return alpha.convergent(n).theta


def three_gap_threshold(alpha: RotationNumber, n: int) -> int:
    """N_n = floor((q_n + q_{n+1}) / 2), computed exactly."""
    return (alpha.q(n) + alpha.q(n + 1)) // 2


def diophantine_class_estimate(alpha: RotationNumber, window) -> DiophantineEstimate:
    """
    Estimate the Diophantine class from the ratios ln q_{n+1} / ln q_n over a window.

    For the golden ratio the ratios tend to 1; for the square-growth rule q_{n+1} ~ q_n^2 they tend
    to 2. The estimate only sees finitely many convergents and is labelled as such.

    Parameters
    ----------
    alpha : RotationNumber
    window : IndexWindow or (int, int)
        Indices n; the start must be at least 2 so that q_n > 1.

    Returns
    -------
    DiophantineEstimate
    """
    window = IndexWindow.from_value(window)
    if window.start < 2:
        raise ValueError(f"The window must start at n >= 2, found {window}")

    alpha.extend(window.stop + 1)
    trace = []
    for n in window:
        q_n, q_next = alpha.q(n), alpha.q(n + 1)
        if q_n < 2:
            continue
        trace.append((n, math.log(q_next) / math.log(q_n)))

    nu_hat = max(ratio for _, ratio in trace) if trace else 1.0
    return DiophantineEstimate(nu_hat=nu_hat, window=window, trace=trace)


def quadratic_rotation(a: int, b: int, c: int, d: int) -> RotationNumber:
    """
    The fractional part of (a + b sqrt(d)) / c as a rotation number.

    The expansion is computed exactly by sympy and its integer part discarded.

    Raises
    ------
    IrrationalityError
        If the number is rational.
    """
    spec = f"quad:{a},{b},{c},{d}"
    if c == 0:
        raise ValueError(f"{spec}: the denominator C must be non-zero")
    if b == 0 or d <= 0 or sp.sqrt(sp.Integer(d)).is_rational:
        raise IrrationalityError(spec)

    sign = 1 if b > 0 else -1
    terms = continued_fraction_periodic(a, c, b * b * d, sign)
    if not terms or not isinstance(terms[-1], list):
        raise IrrationalityError(spec)

    period = [int(x) for x in terms[-1]]
    if len(terms) == 1:
        # purely periodic: a_0 is the first period element
        prefix, period = [], period[1:] + period[:1]
    else:
        prefix = [int(x) for x in terms[1:-1]]
    return RotationNumber(PeriodicQuotients(period, prefix), name=spec)
