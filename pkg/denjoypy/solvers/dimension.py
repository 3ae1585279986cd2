import math
import warnings
from typing import Dict, Optional, Sequence

import pandas as pd
import sympy as sp
from mpmath import iv, mp

from denjoypy.classes.gap_sequence import BASE_POWER, GapSequence
from denjoypy.classes.progress_bar import ProgressBar
from denjoypy.classes.reports import (
    BisectionResult,
    BoundRow,
    BoundSeries,
    ClosedFormBound,
    DimensionReport,
    LiminfSummary,
)
from denjoypy.classes.rotation import RotationNumber
from denjoypy.exceptions.exceptions import EmptyWindowError, IndeterminateDimensionWarning
from denjoypy.parser.constants import (
    AUTO_WINDOW_LENGTH,
    AUTO_WINDOW_MAX_DIGITS,
    AUTO_WINDOW_STOP,
    DEFAULT_BETA_BRACKET,
    DEFAULT_TOLERANCE,
    MIN_TOLERANCE,
    POSITIVITY_THRESHOLD,
    SLOPE_TOLERANCE,
)
from denjoypy.shared.intervals import (
    interval_power,
    log_lower,
    lower_mpf,
    midpoint,
    upper_mpf,
    working_precision,
)
from denjoypy.shared.utilities import IndexWindow, as_rational, geometric_grid, trend_slope
from denjoypy.solvers.bounds import lower_bound_series
from denjoypy.solvers.continued_fractions import diophantine_class_estimate
from denjoypy.solvers.gap_lengths import validate_delta
from denjoypy.solvers.upper import upper_corollary_check, upper_cover_series
from denjoypy.solvers.zeta import zeta_interval

GOLDEN_BLOCK_FACTOR = 8 / (1 + math.sqrt(5)) ** 2


def _log_bound(row: BoundRow) -> float:
    if row.direction == "lower":
        return log_lower(row.value)
    return float(mp.log(upper_mpf(row.value)))


def liminf_report(series: BoundSeries, window) -> LiminfSummary:
    """
    Finite-window proxy for the liminf of a series.

    The infimum is taken over the certified endpoints of the rows in the window and the trend is
    the least-squares slope of their logarithms against n. Neither is a certified liminf.

    Raises
    ------
    EmptyWindowError
        If no row of the series falls in the window.
    """
    window = IndexWindow.from_value(window)
    rows = series.window_rows(window)
    if not rows:
        available = (min(series.n_values), max(series.n_values)) if series.rows else None
        raise EmptyWindowError(str(window), available)

    n_values = [r.n for r in rows]
    log_values = [_log_bound(r) for r in rows]
    infimum = min(r.bound for r in rows)

    summary = LiminfSummary(
        window=window,
        infimum=infimum,
        trend_slope=trend_slope(n_values, log_values),
        n_values=n_values,
        log_values=log_values,
    )
    series.empirical_liminf = summary
    return summary


def _digits(q: int) -> int:
    return int(q.bit_length() * math.log10(2)) + 1


def _last_admissible(alpha: RotationNumber, start: int, stop: int) -> int:
    """Largest n in (start, stop] reached before q_{n+2} exceeds AUTO_WINDOW_MAX_DIGITS digits."""
    last = start
    for n in range(start + 1, stop + 1):
        if alpha.try_extend(n + 2) < n + 2 or _digits(alpha.q(n + 2)) > AUTO_WINDOW_MAX_DIGITS:
            break
        last = n
    return last


def auto_window(alpha: RotationNumber) -> IndexWindow:
    """
    Default window for the empirical liminf: it ends at the largest n <= AUTO_WINDOW_STOP for which
    q_{n+2} has at most AUTO_WINDOW_MAX_DIGITS digits and spans AUTO_WINDOW_LENGTH indices.
    """
    stop = _last_admissible(alpha, 1, AUTO_WINDOW_STOP)
    return IndexWindow(max(2, stop - AUTO_WINDOW_LENGTH + 1), max(2, stop))


def _widen(alpha: RotationNumber, window: IndexWindow) -> IndexWindow:
    """The window of twice the length, cut where the denominators get too long."""
    stop = _last_admissible(alpha, window.stop, window.widened().stop)
    return IndexWindow(window.start, stop)


def positivity_predicate(
    alpha: RotationNumber,
    seq: GapSequence,
    beta,
    method: str,
    window: IndexWindow,
    L: int = 0,
    threshold: float = POSITIVITY_THRESHOLD,
    n_jobs: int = 1,
) -> bool:
    """
    Whether the estimator at exponent beta looks bounded away from zero over the window.

    A trend slope above SLOPE_TOLERANCE counts as positive and one below -SLOPE_TOLERANCE as
    vanishing; in between the window infimum is compared with the threshold.
    """
    series = lower_bound_series(alpha, seq, beta, window, method=method, L=L, n_jobs=n_jobs)
    summary = liminf_report(series, window)

    if summary.trend_slope > SLOPE_TOLERANCE:
        return True
    if summary.trend_slope < -SLOPE_TOLERANCE:
        return False
    return summary.infimum >= threshold


def dim_lower_bisect(
    alpha: RotationNumber,
    seq: GapSequence,
    method: str = "a",
    n_window=None,
    tol: float = DEFAULT_TOLERANCE,
    L: int = 0,
    threshold: float = POSITIVITY_THRESHOLD,
    bracket: Sequence[float] = DEFAULT_BETA_BRACKET,
    n_jobs: int = 1,
    verbose: bool = False,
) -> BisectionResult:
    """
    Bracket the largest beta for which the estimator stays positive, a lower bound for dim_H.

    The positivity predicate holds for small beta and fails for large beta, so the bracket
    [beta_lo, beta_hi] separates the exponents with positive empirical liminf from those with
    vanishing one; both characterizations of the bound lie in it.

    Parameters
    ----------
    alpha : RotationNumber
    seq : GapSequence
    method : str
        "a", "b" or "c".
    n_window : IndexWindow, optional
        Window of convergent indices; ``auto_window(alpha)`` when omitted.
    tol : float
        Width of the returned bracket, at least MIN_TOLERANCE.
    L : int
        Truncation for methods b and c.
    threshold : float
        Positivity threshold used when the trend is flat.
    bracket : (float, float)
        Initial bracket, within (0, 1].
    n_jobs : int
        Parallel rows per predicate evaluation.
    verbose : bool
        Show bisection progress on standard error.

    Returns
    -------
    BisectionResult
        Status "bracketed", "saturated" (positive up to the bracket's upper end) or
        "indeterminate" (the predicate fails at the lower end even on a widened window, or is not
        monotone).
    """
    if method not in ("a", "b", "c"):
        raise ValueError(f"Dimension bisection uses method a, b or c, found '{method}'")
    if tol < MIN_TOLERANCE:
        raise ValueError(f"The bisection tolerance must be at least {MIN_TOLERANCE}, found {tol}")

    window = auto_window(alpha) if n_window is None else IndexWindow.from_value(n_window)
    lo, hi = float(bracket[0]), float(bracket[1])
    evaluations = []

    def predicate(beta: float, win: IndexWindow) -> bool:
        positive = positivity_predicate(alpha, seq, beta, method, win, L, threshold, n_jobs)
        evaluations.append((beta, positive))
        return positive

    def result(beta_lo, beta_hi, status, win):
        return BisectionResult(
            beta_lo=beta_lo,
            beta_hi=beta_hi,
            status=status,
            method=method,
            window=win,
            threshold=threshold,
            tolerance=tol,
            evaluations=list(evaluations),
        )

    at_lo, at_hi = predicate(lo, window), predicate(hi, window)
    if at_lo and at_hi:
        return result(hi, hi, "saturated", window)

    if not at_lo:
        window = _widen(alpha, window)

        at_lo, at_hi = predicate(lo, window), predicate(hi, window)
        if at_lo and at_hi:
            return result(hi, hi, "saturated", window)
        if not at_lo:
            warnings.warn(
                f"The positivity predicate fails at beta = {lo} on the windows tried "
                f"(last {window}); the dimension bound is indeterminate.",
                IndeterminateDimensionWarning,
            )
            return result(0.0, lo, "indeterminate", window)

    n_steps = max(0, math.ceil(math.log2((hi - lo) / tol)))
    progress = ProgressBar(n_steps, verb="Bisection") if verbose and n_steps > 0 else None
    while hi - lo > tol:
        mid = round((lo + hi) / 2, 12)
        if progress is None:
            positive = predicate(mid, window)
        else:
            with progress.step():
                positive = predicate(mid, window)
        if positive:
            lo = mid
        else:
            hi = mid

    return result(lo, hi, "bracketed", window)


def dim_lower_closed_form(delta, nu_hat: float) -> ClosedFormBound:
    """delta / nu_hat, labelled with its dependence on the finite-window estimate of nu."""
    delta = validate_delta(delta)
    if nu_hat < 1:
        raise ValueError(f"The Diophantine class is at least 1, found {nu_hat}")
    return ClosedFormBound(value=float(delta) / nu_hat, delta=float(delta), nu_hat=float(nu_hat))


def closed_form_consistency(
    alpha: RotationNumber, seq: GapSequence, theta, nu: float, eps: float, window
) -> pd.DataFrame:
    """
    Check, for each n of a window, the two inequalities the delta/nu bound is built on:
    |J_n| > n^(-1/theta) and q_{n+1} < q_n^(nu + eps).

    Returns
    -------
    pandas.DataFrame
        Columns n, length_exceeds_power, denominator_within_class.
    """
    window = IndexWindow.from_value(window)
    theta = as_rational(theta)
    alpha.extend(window.stop + 1)

    rows = []
    with working_precision(seq.precision):
        for n in window:
            power = interval_power(iv.mpf(n), -1 / theta)
            exceeds = lower_mpf(seq.length(n)) > upper_mpf(power)
            q_n, q_next = alpha.q(n), alpha.q(n + 1)
            within = math.log(q_next) < (nu + eps) * math.log(q_n) if q_n > 1 else False
            rows.append(
                {"n": n, "length_exceeds_power": exceeds, "denominator_within_class": within}
            )

    return pd.DataFrame(rows, columns=["n", "length_exceeds_power", "denominator_within_class"])


def _zeta_factor(delta: sp.Rational, terms: int, precision: int) -> float:
    """(1 + 2((1 - 2^-s) zeta(s) - 1))^delta with s = 1/delta, the block-sum gain of method B."""
    s = 1 / delta
    with working_precision(precision):
        zeta = zeta_interval(s, terms, precision).value
        odd_sum = (1 - interval_power(iv.mpf(2), -s)) * zeta - 1
        return float(midpoint(1 + 2 * odd_sum)) ** float(delta)


def reference_constants(
    delta, c_delta: Optional[float] = None, terms: int = 10**4, precision: int = 96
) -> Dict[str, float]:
    """
    Limit constants of the estimators for the golden rotation and the classical sequence.

    Each constant is given for normalized lengths (the library's convention) and for lengths that
    are not divided by c_delta ("printed"); the two differ by the factor c_delta^(2 delta), the
    effect of scaling every length by c_delta^2.

    Returns
    -------
    dict
        c_delta, method_a_limit, method_b_zeta_factor, method_b_limit, order_stat_constant,
        cover_limit, each limit also with the suffix ``_printed``.
    """
    delta_q = validate_delta(delta)
    d = float(delta_q)
    if c_delta is None:
        with working_precision(precision):
            c_delta = midpoint(2 * zeta_interval(1 / delta_q, terms, precision).value - 1)

    factor = _zeta_factor(delta_q, terms, precision)
    a_norm = GOLDEN_BLOCK_FACTOR * c_delta ** (-d)
    a_printed = GOLDEN_BLOCK_FACTOR * c_delta**d

    return {
        "c_delta": c_delta,
        "method_a_limit": a_norm,
        "method_a_limit_printed": a_printed,
        "method_b_zeta_factor": factor,
        "method_b_limit": a_norm * factor,
        "method_b_limit_printed": a_printed * factor,
        "order_stat_constant": a_norm / 5,
        "order_stat_constant_printed": a_printed / 5,
        "cover_limit": 2 * (d / ((1 - d) * c_delta)) ** d,
        "cover_limit_printed": 2 * (d / (1 - d) * c_delta) ** d,
    }


def build_dimension_report(
    alpha: RotationNumber,
    seq: GapSequence,
    method: str = "a",
    n_window=None,
    tol: float = DEFAULT_TOLERANCE,
    L: int = 0,
    eps_list: Optional[Sequence[float]] = None,
    upper_n_max: int = 10**3,
    n_jobs: int = 1,
    verbose: bool = False,
) -> DimensionReport:
    """
    Collect the dimension estimates for one rotation number and gap sequence.

    The bisection bracket is always computed. The closed form delta/nu_hat, the covering upper
    bound and the tail-exponent check need a smoothness class and are added when the sequence has
    one; the reference constants are added for the classical sequence.
    """
    window = auto_window(alpha) if n_window is None else IndexWindow.from_value(n_window)
    bisection = dim_lower_bisect(alpha, seq, method, window, tol, L, n_jobs=n_jobs, verbose=verbose)

    nu_window = IndexWindow(max(2, window.start), window.stop)
    nu = diophantine_class_estimate(alpha, nu_window)

    report = DimensionReport(
        inputs={
            "alpha": alpha.name,
            "model": seq.name,
            "method": method,
            "window": str(window),
            "tol": tol,
            "L": L,
            "precision": seq.precision,
        },
        beta_star_lower=bisection,
        nu_estimate=nu.to_dict(),
    )

    if seq.delta is not None:
        report.closed_form_lower = dim_lower_closed_form(seq.delta, nu.nu_hat)
        n_values = [int(n) for n in geometric_grid(10, upper_n_max, 8)]
        report.upper_jensen = upper_cover_series(seq, seq.delta, n_values, nu_hat=nu.nu_hat)
        report.upper_corollary_check = upper_corollary_check(
            seq, seq.delta, eps_list if eps_list is not None else [0.05]
        )

    if seq.model == "classical" and seq.base == BASE_POWER:
        report.reference_constants = reference_constants(
            seq.delta, midpoint(seq.total_mass), seq.zeta_terms, seq.precision
        )

    return report
