import warnings
from functools import cmp_to_key
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from denjoypy.classes.rational_interval import RationalInterval
from denjoypy.classes.reports import GapClass, ThreeGapReport
from denjoypy.classes.rotation import RotationNumber
from denjoypy.exceptions.exceptions import EnumerationBudgetError, PartialTableWarning
from denjoypy.parser.constants import ENUMERATION_BUDGET
from denjoypy.shared.utilities import IndexWindow
from denjoypy.solvers.continued_fractions import three_gap_threshold

Form = Tuple[int, int]

DISPLAY_DENOMINATOR = 2**64
INT64_SAFE = 2**62


def _ordering_depth(alpha: RotationNumber, span: int, reach: int) -> int:
    """
    Smallest m with q_m > span and q_{m+1} > 2 * reach.

    With alpha = p_m/q_m + e and |e| < 1/(q_m q_{m+1}), every t in the orbit has |t e| < 1/(2 q_m),
    so the circle order of the points t*alpha is the order of the residues t*p_m mod q_m.
    """
    m = 1
    while not (alpha.q(m) > span and alpha.q(m + 1) > 2 * reach):
        m += 1
    return m


def _display_depth(alpha: RotationNumber, depth: int) -> int:
    while alpha.q(depth) < DISPLAY_DENOMINATOR and alpha.try_extend(depth + 1) > depth:
        depth += 1
    return depth


def form_length(alpha: RotationNumber, form: Form, depth: int) -> RationalInterval:
    """Rational interval for d*alpha - j on the alpha interval of the given depth."""
    d, j = form
    return alpha.alpha_interval(depth).affine(d, j)


def compare_forms(alpha: RotationNumber, first: Form, second: Form, depth: int = 1) -> int:
    """
    Certified sign of (d1*alpha - j1) - (d2*alpha - j2).

    The alpha interval is refined until the difference is separated from zero, which always
    happens for irrational alpha unless the two forms coincide.

    Returns
    -------
    int
        -1, 0 or 1.
    """
    dd, dj = first[0] - second[0], first[1] - second[1]
    if dd == 0:
        return (dj < 0) - (dj > 0)

    while True:
        difference = alpha.alpha_interval(depth).affine(dd, dj)
        if difference.excludes_zero():
            return difference.sign()
        alpha.extend(depth + 1)
        depth += 1


def _check_budget(n_points: int):
    if n_points > ENUMERATION_BUDGET:
        raise EnumerationBudgetError(n_points, ENUMERATION_BUDGET)


def _orbit_partition(alpha: RotationNumber, t_min: int, t_max: int):
    """
    Sort the orbit {t alpha : t_min <= t <= t_max} around the circle and express every gap as a
    linear form.

    Returns the ordering depth, the indices in circle order starting from 0, and per point the
    integers (d, j) of the gap that follows it.
    """
    if t_min == t_max:
        # a single point leaves one gap of length 1 = 0*alpha + 1
        single = np.array([t_min], dtype=np.int64)
        return 1, single, np.zeros(1, dtype=np.int64), -np.ones(1, dtype=np.int64)

    span, reach = t_max - t_min, max(-t_min, t_max)
    depth = _ordering_depth(alpha, span, reach)
    p, q = alpha.p(depth), alpha.q(depth)

    t = np.arange(t_min, t_max + 1, dtype=np.int64)
    if reach * q >= INT64_SAFE:
        t = t.astype(object)

    residues = (t * p) % q
    order = np.argsort(residues, kind="stable")
    ts, rs = t[order], residues[order]

    differences = np.roll(ts, -1) - ts
    residue_gaps = (np.roll(rs, -1) - rs) % q
    shifts = (differences * p - residue_gaps) // q

    return depth, ts, differences, shifts


def _build_classes(
    alpha: RotationNumber, depth: int, differences: np.ndarray, shifts: np.ndarray
) -> List[GapClass]:
    keys, first, counts = np.unique(differences, return_index=True, return_counts=True)
    display = _display_depth(alpha, depth)

    classes = []
    for d, idx, count in zip(keys, first, counts):
        form = (int(d), int(shifts[idx]))
        classes.append(
            GapClass(
                difference=form[0],
                shift=form[1],
                multiplicity=int(count),
                length=form_length(alpha, form, display),
            )
        )

    def descending(a: GapClass, b: GapClass) -> int:
        return compare_forms(alpha, b.form, a.form, depth)

    return sorted(classes, key=cmp_to_key(descending))


def orbit_gap_structure(
    alpha: RotationNumber,
    t_min: int,
    t_max: int,
    reference_n: Optional[int] = None,
) -> ThreeGapReport:
    """
    Exact gap classes of the orbit {t alpha : t_min <= t <= t_max}, which must contain 0.

    Parameters
    ----------
    alpha : RotationNumber
    t_min, t_max : int
        Orbit extent, with t_min <= 0 <= t_max and at most ENUMERATION_BUDGET points.
    reference_n : int, optional
        Convergent index to compare the orbit against.

    Returns
    -------
    ThreeGapReport

    Raises
    ------
    EnumerationBudgetError
        If the orbit has more points than the enumeration budget.
    """
    if not t_min <= 0 <= t_max:
        raise ValueError(f"The orbit range [{t_min}, {t_max}] must contain 0.")
    _check_budget(t_max - t_min + 1)

    depth, orbit, differences, shifts = _orbit_partition(alpha, t_min, t_max)
    classes = _build_classes(alpha, depth, differences, shifts)

    reference_norm = None if reference_n is None else alpha.convergent(reference_n).theta
    return ThreeGapReport(
        alpha=alpha.name,
        t_min=t_min,
        t_max=t_max,
        classes=classes,
        reference_n=reference_n,
        reference_norm=reference_norm,
        ordering_depth=depth,
        alpha_float=alpha.to_float(),
        orbit=orbit,
        gap_differences=differences,
    )


def _forward_reference(alpha: RotationNumber, K: int) -> Optional[int]:
    """Largest n >= 1 with q_n + q_{n+1} - 1 <= K."""
    n = 0
    while alpha.q(n + 1) + alpha.q(n + 2) - 1 <= K:
        n += 1
    return n or None


def _symmetric_reference(alpha: RotationNumber, N: int) -> Optional[int]:
    """Largest n >= 1 with N_n <= N."""
    n = 0
    while three_gap_threshold(alpha, n + 1) <= N:
        n += 1
    return n or None


def forward_gap_structure(alpha: RotationNumber, K: int) -> ThreeGapReport:
    """
    Gap structure of the forward orbit {k alpha : 0 <= k <= K}.

    There are at most three classes. When K = q_n + q_{n+1} - 1 there are exactly two, q_n gaps of
    length ||q_{n+1} alpha|| and q_{n+1} gaps of length ||q_n alpha||.

    Parameters
    ----------
    alpha : RotationNumber
    K : int
        At least 1.

    Returns
    -------
    ThreeGapReport
    """
    if K < 1:
        raise ValueError(f"K must be at least 1, found {K}")
    _check_budget(K + 1)

    return orbit_gap_structure(alpha, 0, K, reference_n=_forward_reference(alpha, K))


def symmetric_gap_structure(alpha: RotationNumber, N: int) -> ThreeGapReport:
    """
    Gap structure of the symmetric orbit {t alpha : -N <= t <= N}.

    When N = N_n and Q_n is even the orbit has one point more than the two-length configuration,
    and a single gap of a third length appears; it is returned as ``anomalous``.
    """
    if N < 0:
        raise ValueError(f"N must be non-negative, found {N}")
    _check_budget(2 * N + 1)

    reference_n = _symmetric_reference(alpha, N)
    report = orbit_gap_structure(alpha, -N, N, reference_n=reference_n)

    if reference_n is not None and len(report.classes) == 3:
        expected = {alpha.q(reference_n), alpha.q(reference_n + 1)}
        for gap_class in report.classes:
            if gap_class.multiplicity == 1 and abs(gap_class.difference) not in expected:
                report.anomalous = gap_class
                break

    return report


def symmetric_max_gap(alpha: RotationNumber, N: int) -> RationalInterval:
    """Interval for the maximal gap between the points t*alpha, -N <= t <= N."""
    return symmetric_gap_structure(alpha, N).max_gap.length


def max_gap_within_norm(alpha: RotationNumber, N: int, n: int) -> bool:
    """Certified answer to: is every gap of {t alpha : |t| <= N} at most ||q_n alpha||?"""
    _check_budget(2 * N + 1)
    depth, _, differences, shifts = _orbit_partition(alpha, -N, N)
    classes = _build_classes(alpha, depth, differences, shifts)
    return compare_forms(alpha, classes[0].form, alpha.convergent(n).theta_form(), depth) <= 0


def threshold_check(alpha: RotationNumber, n_range) -> pd.DataFrame:
    """
    Verify both directions of the threshold lemma: the maximal gap of {t alpha : |t| <= N} is at
    most ||q_n alpha|| when N = N_n and exceeds it when N = N_n - 1.

    Rows whose orbit exceeds the enumeration budget are dropped, together with every later n, and a
    ``PartialTableWarning`` is issued.

    Returns
    -------
    pandas.DataFrame
        Columns n, N_n, holds_at_N, fails_below_N.
    """
    window = IndexWindow.from_value(n_range)
    rows = []
    for n in window:
        N = three_gap_threshold(alpha, n)
        if 2 * N + 1 > ENUMERATION_BUDGET:
            warnings.warn(
                f"threshold_check stopped at n = {n}: the orbit of {2 * N + 1} points exceeds the "
                f"enumeration budget of {ENUMERATION_BUDGET}.",
                PartialTableWarning,
            )
            break

        holds = max_gap_within_norm(alpha, N, n)
        fails_below = not max_gap_within_norm(alpha, N - 1, n) if N >= 1 else True
        rows.append({"n": n, "N_n": N, "holds_at_N": holds, "fails_below_N": fails_below})

    return pd.DataFrame(rows, columns=["n", "N_n", "holds_at_N", "fails_below_N"])


def rotation_invariant(alpha: RotationNumber, N: int) -> bool:
    """
    Whether {t alpha : -N <= t <= N} and {t alpha : 0 <= t <= 2N} have the same gap classes, as
    they must since one is a rotation of the other.
    """
    symmetric = symmetric_gap_structure(alpha, N)
    forward = orbit_gap_structure(alpha, 0, 2 * N)

    def signature(report):
        return sorted((c.difference, c.shift, c.multiplicity) for c in report.classes)

    return signature(symmetric) == signature(forward)


def analytic_gap_structure(alpha: RotationNumber, n: int) -> ThreeGapReport:
    """
    Gap structure of {k alpha : 0 <= k <= q_n + q_{n+1} - 1} from the norms alone, without
    enumerating the orbit: q_{n+1} gaps of length ||q_n alpha|| and q_n gaps of length
    ||q_{n+1} alpha||.
    """
    current, following = alpha.convergent(n), alpha.convergent(n + 1)
    long_form, short_form = current.theta_form(), following.theta_form()

    classes = [
        GapClass(long_form[0], long_form[1], following.q, current.theta),
        GapClass(short_form[0], short_form[1], current.q, following.theta),
    ]
    return ThreeGapReport(
        alpha=alpha.name,
        t_min=0,
        t_max=current.q + following.q - 1,
        classes=classes,
        reference_n=n,
        reference_norm=current.theta,
        analytic=True,
        alpha_float=alpha.to_float(),
    )
