import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import sympy as sp
from mpmath import iv, mp

from denjoypy.classes.gap_sequence import (
    BASE_LOGCUBED,
    BASE_POWER,
    ExceptionRule,
    GapSequence,
)
from denjoypy.exceptions.exceptions import InvalidDeltaError, SkippedIndexWarning
from denjoypy.parser.constants import DEFAULT_PRECISION, TAIL_TERMS, ZETA_TERMS
from denjoypy.shared.intervals import (
    endpoints,
    interval_sum,
    lower_mpf,
    upper_mpf,
    working_precision,
)
from denjoypy.shared.utilities import IndexWindow, as_rational

Number = Union[int, float, str, sp.Rational]


def validate_delta(delta: Number) -> sp.Rational:
    delta = as_rational(delta)
    if not 0 < delta < 1:
        raise InvalidDeltaError(delta)
    return delta


def classical_sequence(
    delta: Number, terms: int = ZETA_TERMS, precision: int = DEFAULT_PRECISION
) -> GapSequence:
    """
    The classical Denjoy sequence of class delta, l_n = (|n| + 1)^(-1/delta) / c_delta.

    The constant c_delta = 2 zeta(1/delta) - 1 is the unnormalized total, enclosed with
    ``zeta_interval(1/delta, terms)``, so the lengths sum to 1.

    Parameters
    ----------
    delta : int, float, str or sympy.Rational
        Smoothness class in (0, 1). Decimal input is read exactly, so 1/delta stays rational.
    terms : int, optional
        Summands of the zeta series added explicitly.
    precision : int, optional
        Working precision in bits.

    Returns
    -------
    GapSequence

    Raises
    ------
    InvalidDeltaError
        If delta is not in (0, 1).
    """
    delta = validate_delta(delta)
    return GapSequence(
        model="classical",
        base=BASE_POWER,
        exponent=1 / delta,
        delta=delta,
        precision=precision,
        zeta_terms=terms,
    )


def perturbed_sequence(base: GapSequence, exceptions: ExceptionRule) -> GapSequence:
    """
    The base sequence with the lengths on a sparse index set replaced before normalization.

    The normalizer is recomputed over the new sequence and the exception indices are recorded so
    that range minima enumerate them explicitly.
    """
    if base.table is not None or base.exceptions is not None:
        raise ValueError("Exceptions can only be applied to a classical or log-cubed base sequence.")
    if exceptions.has_rule and base.base != BASE_POWER:
        raise ValueError("Power exception rules need a classical base sequence.")

    return GapSequence(
        model="perturbed",
        base=base.base,
        exponent=base.exponent,
        delta=base.delta,
        exceptions=exceptions,
        scale=base.scale,
        precision=base.precision,
        zeta_terms=base.zeta_terms,
        tail_terms=base.tail_terms,
    )


def logcubed_sequence(
    terms: int = 4 * TAIL_TERMS, precision: int = DEFAULT_PRECISION, delta: Optional[Number] = None
) -> GapSequence:
    """
    The sequence l_n = c (|n| + 2)^(-3) ln(|n| + 2).

    The argument is shifted by two so that every length is positive and the sequence decreases in
    |n|; asymptotically it is c |n|^(-3) ln|n|. The shift is recorded in ``shifted``.
    """
    return GapSequence(
        model="logcubed",
        base=BASE_LOGCUBED,
        delta=None if delta is None else validate_delta(delta),
        precision=precision,
        tail_terms=terms,
    )


def table_sequence(
    entries: Dict[int, float], tail_delta: Number, precision: int = DEFAULT_PRECISION
) -> GapSequence:
    """
    Explicit lengths on -T..T continued by the classical tail (|n| + 1)^(-1/tail_delta).

    Table values are unnormalized and on the same scale as the tail.
    """
    tail_delta = validate_delta(tail_delta)
    radius = max(abs(i) for i in entries)
    missing = [i for i in range(-radius, radius + 1) if i not in entries]
    if missing:
        raise ValueError(f"The gap table must cover every index in [-{radius}, {radius}]; missing {missing[:5]}")
    for i, v in entries.items():
        if v <= 0:
            raise ValueError(f"Gap lengths must be positive, found {v} at index {i}")

    return GapSequence(
        model="table",
        base=BASE_POWER,
        exponent=1 / tail_delta,
        delta=tail_delta,
        table=entries,
        precision=precision,
    )


def scaled_sequence(seq: GapSequence, factor: Number) -> GapSequence:
    """
    The sequence multiplied by a positive constant, so that its lengths sum to ``factor`` times
    the original total.
    """
    factor = as_rational(factor)
    if factor <= 0:
        raise ValueError(f"The scale factor must be positive, found {factor}")

    return GapSequence(
        model=seq.model,
        base=seq.base,
        exponent=seq.exponent,
        delta=seq.delta,
        exceptions=seq.exceptions,
        table=seq.table,
        scale=factor * as_rational(seq.scale),
        precision=seq.precision,
        zeta_terms=seq.zeta_terms,
        tail_terms=seq.tail_terms,
    )


def range_min(seq: GapSequence, lo: int, hi: int) -> "iv.mpf":
    """Interval enclosing min{l_i : lo <= i <= hi}."""
    return seq.range_min(lo, hi)


def range_k_smallest(seq: GapSequence, lo: int, hi: int, m: int) -> List["iv.mpf"]:
    """Intervals enclosing the m smallest lengths on [lo, hi], ascending."""
    return seq.range_k_smallest(lo, hi, m)


def tail_sum(seq: GapSequence, n: int) -> "iv.mpf":
    """
    Interval enclosing the sum of l_k over |k| > n.

    Parameters
    ----------
    seq : GapSequence
    n : int
        At least 2.
    """
    if n < 2:
        raise ValueError(f"tail_sum needs n >= 2, found {n}")
    return seq.tail_sum(n)


def normalization_check(seq: GapSequence, radius: int = 100) -> "iv.mpf":
    """
    Interval enclosing the total of the sequence, computed as the explicit sum over |i| <= radius
    plus the certified tail. It contains ``seq.scale``.
    """
    with working_precision(seq.precision):
        inside = interval_sum(seq.length(i) for i in range(-radius, radius + 1))
        return inside + seq.tail_sum(radius)


@dataclass(frozen=True)
class DenjoyClassEstimate:
    """
    Per-n values of ln|l_n - l_{n+1}| / ln l_n over a finite window, with their running infimum.

    The liminf of these values is 1 + delta for a Denjoy sequence of class delta; a finite window
    only gives an estimate.
    """

    window: IndexWindow
    values: List[Tuple[int, float]]
    running_infimum: List[float]
    skipped: List[int] = field(default_factory=list)
    target: Optional[float] = None
    label: str = "finite-window estimate of 1 + delta"

    @property
    def estimate(self) -> float:
        return self.running_infimum[-1] if self.running_infimum else float("nan")

    def to_dict(self) -> dict:
        return {
            "window": str(self.window),
            "values": [{"n": n, "ratio": r} for n, r in self.values],
            "running_infimum": self.running_infimum,
            "skipped": self.skipped,
            "target": self.target,
            "label": self.label,
        }


def denjoy_class_estimate(seq: GapSequence, window) -> DenjoyClassEstimate:
    """
    Estimate the Denjoy class from ln|l_n - l_{n+1}| / ln l_n over a window of indices.

    Consecutive lengths whose difference cannot be separated from zero are skipped with a
    ``SkippedIndexWarning``.

    Parameters
    ----------
    seq : GapSequence
    window : IndexWindow or (int, int)

    Returns
    -------
    DenjoyClassEstimate
    """
    window = IndexWindow.from_value(window)
    values, running, skipped = [], [], []

    with working_precision(seq.precision):
        normalizer = seq.normalizer
        for n in window:
            difference = abs(normalizer * (seq.raw_length(n) - seq.raw_length(n + 1)))
            if lower_mpf(difference) <= 0:
                skipped.append(n)
                continue

            diff_lo, diff_hi = endpoints(difference)
            length = seq.length(n)
            length_mid = (lower_mpf(length) + upper_mpf(length)) / 2
            ratio = float(mp.log((diff_lo + diff_hi) / 2) / mp.log(length_mid))
            values.append((n, ratio))
            running.append(min(ratio, running[-1]) if running else ratio)

    if skipped:
        warnings.warn(
            f"Skipped {len(skipped)} indices with equal consecutive gap lengths: {skipped[:10]}",
            SkippedIndexWarning,
        )

    target = None if seq.delta is None else float(1 + seq.delta)
    return DenjoyClassEstimate(
        window=window, values=values, running_infimum=running, skipped=skipped, target=target
    )


def c_delta(delta: Number, terms: int = ZETA_TERMS, precision: int = DEFAULT_PRECISION) -> "iv.mpf":
    """Interval containing c_delta = 2 zeta(1/delta) - 1."""
    return classical_sequence(delta, terms, precision).total_mass

