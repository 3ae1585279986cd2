import math
from typing import Iterable, Optional, Sequence

import numpy as np
from mpmath import iv, mp

from denjoypy.classes.gap_sequence import GapSequence
from denjoypy.classes.reports import (
    BoundRow,
    BoundSeries,
    CorollaryCheck,
    CorollaryRow,
    UpperCoverSummary,
)
from denjoypy.parser.constants import COROLLARY_SLOPE_TOLERANCE
from denjoypy.shared.intervals import (
    interval_power,
    midpoint,
    upper,
    upper_mpf,
    working_precision,
)
from denjoypy.shared.utilities import as_rational, geometric_grid, trend_slope
from denjoypy.solvers.gap_lengths import validate_delta

NU_ONE_TOLERANCE = 0.15

PRINTED_SIGN_NOTE = (
    "The covering constant is written with delta/(delta - 1), which is negative for delta < 1; the "
    "integral comparison of the tail gives delta/(1 - delta), which is used here."
)


def upper_bound_cover(seq: GapSequence, delta, n: int) -> "iv.mpf":
    """
    Covering estimate (2n + 1)^(1 - delta) * tail(n)^delta of H_delta.

    The minimal set is covered by the 2n + 1 arcs between consecutive gaps J_k, |k| <= n, whose
    total length is the tail sum beyond n; Jensen's inequality bounds the sum of their
    delta-th powers by the value returned here.

    Parameters
    ----------
    seq : GapSequence
    delta : float, str or sympy.Rational
        Exponent in (0, 1).
    n : int
        At least 2.

    Returns
    -------
    iv.mpf
        The upper endpoint is a certified upper bound.
    """
    delta = validate_delta(delta)
    if n < 2:
        raise ValueError(f"upper_bound_cover needs n >= 2, found {n}")

    with working_precision(seq.precision):
        tail = seq.tail_sum(n)
        return interval_power(iv.mpf(2 * n + 1), 1 - delta) * interval_power(tail, delta)


def cover_limit_constant(delta, c_delta: float) -> float:
    """2 (delta / ((1 - delta) c_delta))^delta, the limit of the cover values (normalized)."""
    delta = float(as_rational(delta))
    return 2 * (delta / ((1 - delta) * c_delta)) ** delta


def printed_cover_constant(delta, c_delta: float) -> float:
    """2 (delta / (1 - delta) * c_delta)^delta, the same limit with lengths not divided by c."""
    delta = float(as_rational(delta))
    return 2 * (delta / (1 - delta) * c_delta) ** delta


def upper_cover_series(
    seq: GapSequence, delta, n_values: Iterable[int], nu_hat: Optional[float] = None
) -> UpperCoverSummary:
    """
    Cover values for several n with their limit constants.

    The conclusion "H_delta <= ..." is only stated when an estimate ``nu_hat`` of the Diophantine
    class close to 1 is supplied, since the covering theorem assumes nu = 1.
    """
    delta_q = validate_delta(delta)
    rows = []
    for n in n_values:
        value = upper_bound_cover(seq, delta_q, int(n))
        rows.append(
            BoundRow(
                n=int(n),
                q=None,
                N=None,
                Q=None,
                method="upper-cover",
                beta=float(delta_q),
                value_mpi=value._mpi_,
                truncation_L=int(n),
                direction="upper",
            )
        )

    series = BoundSeries(method="upper-cover", beta=float(delta_q), rows=rows, model=seq.name)

    limit, printed = None, None
    if seq.model == "classical":
        c_delta = midpoint(seq.total_mass)
        limit = cover_limit_constant(delta_q, c_delta)
        printed = printed_cover_constant(delta_q, c_delta)

    conclusion = None
    if nu_hat is not None and abs(nu_hat - 1) <= NU_ONE_TOLERANCE and rows:
        last = rows[-1]
        conclusion = (
            f"H_{float(delta_q):g}(Omega) <= {upper(last.value):.6g} "
            f"(cover at n = {last.n}, nu_hat = {nu_hat:.4g})"
        )

    return UpperCoverSummary(
        series=series,
        limit_constant=limit,
        printed_convention_constant=printed,
        printed_sign_note=PRINTED_SIGN_NOTE,
        conclusion=conclusion,
    )


def upper_corollary_check(
    seq: GapSequence,
    delta,
    eps_list: Sequence[float],
    n_samples: int = 12,
    n_range: Sequence[int] = (10, 10**4),
) -> CorollaryCheck:
    """
    Test whether tail(n) <= C n^(1 - 1/(delta + eps)) along a geometric sample of n.

    For each eps the ratio tail(n) / n^(1 - 1/(delta + eps)) is computed on the sample; the verdict
    is true when ln(ratio) does not grow in ln(n) (slope at most COROLLARY_SLOPE_TOLERANCE), and
    the fitted C is the largest ratio. Exponents with delta + eps >= 1 are non-negative and the
    inequality is trivial; such rows are flagged degenerate.

    This is heuristic evidence for dim_H = delta, not a proof.
    """
    delta_q = validate_delta(delta)
    samples = [int(n) for n in geometric_grid(max(2, n_range[0]), n_range[1], n_samples)]
    log_n = np.log(samples)

    with working_precision(seq.precision):
        tails = [seq.tail_sum(n) for n in samples]

        rows = []
        for eps in eps_list:
            degenerate = float(delta_q) + eps >= 1
            exponent = 1 - 1 / (float(delta_q) + eps)

            ratios = [upper_mpf(t) / mp.mpf(n) ** exponent for t, n in zip(tails, samples)]
            log_ratios = [float(mp.log(r)) for r in ratios]
            slope = trend_slope(log_n, log_ratios)
            fitted = float(max(ratios))

            rows.append(
                CorollaryRow(
                    eps=float(eps),
                    exponent=exponent,
                    verdict=degenerate or slope <= COROLLARY_SLOPE_TOLERANCE,
                    fitted_constant=fitted if math.isfinite(fitted) else float("inf"),
                    log_ratio_slope=slope,
                    degenerate=degenerate,
                )
            )

    return CorollaryCheck(delta=float(delta_q), rows=rows, samples=samples)

