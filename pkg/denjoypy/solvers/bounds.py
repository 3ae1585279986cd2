from typing import Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp
from joblib import Parallel, delayed
from mpmath import iv

from denjoypy.classes.gap_sequence import GapSequence, KernelData
from denjoypy.classes.progress_bar import ProgressBar
from denjoypy.classes.reports import BoundRow, BoundSeries
from denjoypy.classes.rotation import RotationNumber
from denjoypy.exceptions.exceptions import InvalidOrderStatisticError
from denjoypy.numba_tools.kernels import base_length, partition_scores
from denjoypy.parser.constants import (
    BOUND_METHODS,
    FLOAT_INDEX_LIMIT,
    FLOAT_VALUE_FLOOR,
    OFFSET_ENUMERATION_CAP,
    OFFSET_POLICIES,
    ORDER_STATISTICS,
    SAMPLED_OFFSETS,
)
from denjoypy.shared.intervals import (
    interval_power,
    interval_sum,
    lower_mpf,
    working_precision,
)
from denjoypy.shared.utilities import IndexWindow, as_rational

OffsetPolicy = Union[str, Sequence[int]]

FALLBACK_OFFSETS = 8


def _exponent(beta) -> sp.Rational:
    beta = as_rational(beta)
    if beta <= 0:
        raise ValueError(f"beta must be positive, found {beta}")
    return beta


def _scale(q: int, inner: "iv.mpf", beta: sp.Rational) -> "iv.mpf":
    return q * interval_power(inner, beta)


def central_block_sum(seq: GapSequence, N: int, L: int) -> "iv.mpf":
    """
    Interval for the sum over |l| <= L of min{l_i : (2l - 1) N <= i <= (2l + 1) N}.

    All terms are positive, so any truncation L is a valid lower bound for the full sum.
    """
    if L < 0:
        raise ValueError(f"The truncation L must be non-negative, found {L}")
    with working_precision(seq.precision):
        return interval_sum(
            seq.range_min((2 * l - 1) * N, (2 * l + 1) * N) for l in range(-L, L + 1)
        )


def _check_statistic(statistic: str) -> str:
    if statistic not in ORDER_STATISTICS:
        raise ValueError(
            f"Unknown block statistic '{statistic}', expected one of {ORDER_STATISTICS.values()}"
        )
    return statistic


def block_value(seq: GapSequence, lo: int, hi: int, m: int, statistic: str) -> "iv.mpf":
    """
    What a block [lo, hi] hit at least m times contributes to the covering estimate.

    An arc holding m distinct gaps of the block is at least as long as the sum of the m smallest
    lengths ("sum"), and at least as long as the m-th smallest one ("kth"), which ignores up to
    m - 1 exceptionally short gaps. Both agree for m = 1.
    """
    if _check_statistic(statistic) == ORDER_STATISTICS.SUM.value or m == 1:
        return seq.block_smallest_sum(lo, hi, m)
    return seq.block_order_statistic(lo, hi, m)


def partition_sum(
    seq: GapSequence,
    offset: int,
    block_len: int,
    L: int,
    m: int = 1,
    statistic: str = ORDER_STATISTICS.SUM.value,
) -> "iv.mpf":
    """
    Interval for the sum over |l| <= L of ``block_value`` on the block
    [offset + l*block_len, offset + (l+1)*block_len - 1].
    """
    if L < 0:
        raise ValueError(f"The truncation L must be non-negative, found {L}")
    with working_precision(seq.precision):
        return interval_sum(
            block_value(
                seq, offset + l * block_len, offset + (l + 1) * block_len - 1, m, statistic
            )
            for l in range(-L, L + 1)
        )


def outer_partition_sum(
    seq: GapSequence,
    start: int,
    block_len: int,
    L: int,
    m: int = 1,
    statistic: str = ORDER_STATISTICS.KTH.value,
) -> "iv.mpf":
    """
    Interval for the sum of ``block_value`` over the blocks
    [start + l*block_len, start + (l+1)*block_len - 1], l = 0..L, and their mirror images about 0.

    With ``start`` = N_n the blocks leave out the indices |i| < N_n, where the exceptional lengths
    of a perturbed sequence pile up. For m = 2 the first block is the window N_n..5N_n.
    """
    if L < 0:
        raise ValueError(f"The truncation L must be non-negative, found {L}")
    if start < 1:
        raise ValueError(f"Outer blocks must start at an index >= 1, found {start}")
    with working_precision(seq.precision):
        terms = []
        for l in range(L + 1):
            lo, hi = start + l * block_len, start + (l + 1) * block_len - 1
            terms.append(block_value(seq, lo, hi, m, statistic))
            terms.append(block_value(seq, -hi, -lo, m, statistic))
        return interval_sum(terms)


def candidate_offsets(
    block_len: int, policy: OffsetPolicy = OFFSET_POLICIES.AUTO.value
) -> np.ndarray:
    """
    Offsets phi in [-block_len + 1, 0] to try for a partition into blocks of ``block_len``.

    "full" takes all of them, "sampled" takes SAMPLED_OFFSETS evenly spaced ones plus the symmetric
    offset -floor(block_len / 2), "symmetric" only the latter, and "auto" is "full" up to
    OFFSET_ENUMERATION_CAP offsets and "sampled" beyond. An explicit sequence of integers is used as
    given. "outer" is a placement rather than an offset range, see ``outer_partition_sum``.
    """
    symmetric = -(block_len // 2)
    if not isinstance(policy, str):
        offsets = np.unique(np.asarray(policy, dtype=np.int64))
        if offsets.shape[0] == 0:
            raise ValueError("At least one offset is needed.")
        return offsets

    if policy not in OFFSET_POLICIES:
        raise ValueError(
            f"Unknown offset policy '{policy}', expected one of {OFFSET_POLICIES.values()}"
        )
    if policy == OFFSET_POLICIES.OUTER.value:
        raise ValueError("The outer placement has no offsets to enumerate.")
    if policy == OFFSET_POLICIES.AUTO.value:
        full = block_len <= OFFSET_ENUMERATION_CAP
        policy = OFFSET_POLICIES.FULL.value if full else OFFSET_POLICIES.SAMPLED.value

    if policy == OFFSET_POLICIES.FULL.value:
        return np.arange(-block_len + 1, 1, dtype=np.int64)
    if policy == OFFSET_POLICIES.SAMPLED.value:
        sampled = np.linspace(-block_len + 1, 0, SAMPLED_OFFSETS).round().astype(np.int64)
        return np.unique(np.append(sampled, symmetric))
    return np.array([symmetric], dtype=np.int64)


def _kernel_data(
    seq: GapSequence, offsets: np.ndarray, block_len: int, L: int
) -> Optional[KernelData]:
    """Kernel arrays, or None when indices or lengths leave the range the float search can rank."""
    reach = int(np.abs(offsets).max()) + (L + 1) * block_len
    if reach >= FLOAT_INDEX_LIMIT:
        return None

    data = seq.kernel_data(reach)
    smallest = base_length(reach, data.kind, data.params)
    if data.exception_values.shape[0] > 0:
        smallest = min(smallest, data.exception_values.min())
    if data.table.shape[0] > 0:
        smallest = min(smallest, data.table.min())

    if not smallest >= FLOAT_VALUE_FLOOR:
        return None
    return data


def offset_scores(
    seq: GapSequence, block_len: int, L: int, m: int, offsets: np.ndarray
) -> Optional[np.ndarray]:
    """
    Float estimates of ``partition_sum`` for each offset, or None when the float kernel cannot be
    used for this sequence and range.
    """
    data = _kernel_data(seq, offsets, block_len, L)
    if data is None:
        return None

    return partition_scores(
        offsets,
        block_len,
        L,
        m,
        data.kind,
        data.params,
        data.table_radius,
        data.table,
        data.exception_indices,
        data.exception_values,
    )


def best_partition(
    seq: GapSequence,
    block_len: int,
    L: int,
    m: int = 1,
    offsets: OffsetPolicy = "auto",
    statistic: str = ORDER_STATISTICS.SUM.value,
) -> Tuple["iv.mpf", int]:
    """
    The largest certified ``partition_sum`` over a set of offsets, and the offset attaining it.

    The float kernel ranks all offsets by their summed statistic; the top-ranked one and the
    symmetric offset (when it is in the set) are then evaluated with intervals and the larger lower
    endpoint wins. Without the kernel a handful of evenly spaced offsets are evaluated directly.
    """
    if m < 1:
        raise InvalidOrderStatisticError(m, block_len)

    offsets = candidate_offsets(block_len, offsets)
    scores = offset_scores(seq, block_len, L, m, offsets)

    if scores is None:
        picks = np.linspace(0, offsets.shape[0] - 1, min(FALLBACK_OFFSETS, offsets.shape[0]))
        certify = [int(offsets[i]) for i in np.unique(picks.round().astype(np.int64))]
    else:
        certify = [int(offsets[int(np.argmax(scores))])]

    symmetric = -(block_len // 2)
    if symmetric in offsets:
        certify.append(symmetric)

    best_value, best_offset = None, None
    for phi in dict.fromkeys(certify):
        value = partition_sum(seq, phi, block_len, L, m, statistic)
        if best_value is None or lower_mpf(value) > lower_mpf(best_value):
            best_value, best_offset = value, phi

    return best_value, best_offset


def bound_a(alpha: RotationNumber, seq: GapSequence, beta, n: int) -> "iv.mpf":
    """
    q_n * min^beta{l_i : -N_n <= i <= N_n}.

    Parameters
    ----------
    alpha : RotationNumber
    seq : GapSequence
    beta : float, str or sympy.Rational
        Positive exponent; read exactly as a rational.
    n : int
        Convergent index.

    Returns
    -------
    iv.mpf
        The lower endpoint is a certified lower bound.
    """
    return bound_b(alpha, seq, beta, n, L=0)


def bound_b(alpha: RotationNumber, seq: GapSequence, beta, n: int, L: int = 0) -> "iv.mpf":
    """
    q_n * (sum over |l| <= L of min{l_i : (2l - 1) N_n <= i <= (2l + 1) N_n})^beta.

    With L = 0 only the central block remains and the value is ``bound_a``.
    """
    beta = _exponent(beta)
    q, N = alpha.q(n), (alpha.q(n) + alpha.q(n + 1)) // 2
    with working_precision(seq.precision):
        return _scale(q, central_block_sum(seq, N, L), beta)


def _is_outer(offsets: OffsetPolicy) -> bool:
    return isinstance(offsets, str) and offsets == OFFSET_POLICIES.OUTER.value


def _placed_partition(
    seq: GapSequence, Q: int, m: int, L: int, offsets: OffsetPolicy, statistic: str
) -> Tuple["iv.mpf", int]:
    """Block sum for blocks of length m Q and the offset (or outer start) it was taken at."""
    if _is_outer(offsets):
        start = Q // 2
        return outer_partition_sum(seq, start, m * Q, L, m, statistic), start
    return best_partition(seq, m * Q, L, m, offsets, statistic)


def bound_c(
    alpha: RotationNumber,
    seq: GapSequence,
    beta,
    n: int,
    L: int = 0,
    offsets: OffsetPolicy = "auto",
) -> Tuple["iv.mpf", int]:
    """
    q_n * sup over offsets phi of (sum over |l| <= L of the block minima)^beta, with blocks
    phi + l Q_n <= i < phi + (l+1) Q_n.

    Every offset gives a valid lower bound, so the supremum over any tried set is one as well.
    With ``offsets="outer"`` the blocks are placed away from the origin as in
    ``outer_partition_sum`` and the reported offset is their start N_n.

    Returns
    -------
    value : iv.mpf
    offset : int
        The offset attaining the value.
    """
    beta = _exponent(beta)
    q, Q = alpha.q(n), alpha.q(n) + alpha.q(n + 1)
    inner, phi = _placed_partition(seq, Q, 1, L, offsets, ORDER_STATISTICS.SUM.value)
    with working_precision(seq.precision):
        return _scale(q, inner, beta), phi


def _order_stat(alpha, seq, beta, n, m, L, offsets, statistic) -> Tuple["iv.mpf", int]:
    if m < 1:
        raise InvalidOrderStatisticError(m, m)
    beta = _exponent(beta)
    q, Q = alpha.q(n), alpha.q(n) + alpha.q(n + 1)
    inner, phi = _placed_partition(seq, Q, m, L, offsets, _check_statistic(statistic))
    with working_precision(seq.precision):
        return _scale(q, inner, beta), phi


def bound_order_stat(
    alpha: RotationNumber,
    seq: GapSequence,
    beta,
    n: int,
    m: int = 2,
    L: int = 0,
    offsets: OffsetPolicy = OFFSET_POLICIES.OUTER.value,
    statistic: str = ORDER_STATISTICS.KTH.value,
) -> "iv.mpf":
    """
    q_n * (sum over blocks of length m Q_n of the block statistic)^beta.

    Every gap of a block of length m Q_n is hit at least m times, so an arc between a point and
    its q_n-th iterate holds at least m gaps of each block. ``statistic`` selects what a block
    contributes (see ``block_value``): "kth" keeps the estimate flat when a few exceptionally
    short gaps fall into a block, "sum" is larger while the exceptions are not yet negligible.

    The default outer placement starts the blocks at +-N_n, for m = 2 the window N_n..5N_n and its
    mirror image. With m = 1 and the same offsets the value is ``bound_c``.

    Parameters
    ----------
    alpha : RotationNumber
    seq : GapSequence
    beta : float, str or sympy.Rational
    n : int
    m : int
        Multiplicity, at least 1.
    L : int
        Number of further blocks on each side (outer) or block-sum truncation (offset tilings).
    offsets : str or sequence of int
        "outer" or an offset policy of ``candidate_offsets``.
    statistic : str
        "kth" or "sum".

    Returns
    -------
    iv.mpf
    """
    return _order_stat(alpha, seq, beta, n, m, L, offsets, statistic)[0]


def _method_label(method: str, m: int) -> str:
    if method == BOUND_METHODS.ORDER_STAT.value:
        return f"order-stat({m})"
    return method.upper()


def default_offsets(method: str) -> str:
    """The offset policy a method uses when none is given: outer blocks for order-stat."""
    if method == BOUND_METHODS.ORDER_STAT.value:
        return OFFSET_POLICIES.OUTER.value
    return OFFSET_POLICIES.AUTO.value


def bound_row(
    alpha: RotationNumber,
    seq: GapSequence,
    beta,
    n: int,
    method: str,
    L: int = 0,
    m: int = 1,
    offsets: Optional[OffsetPolicy] = None,
    statistic: str = ORDER_STATISTICS.KTH.value,
) -> BoundRow:
    """Evaluate one estimator at one n and pack it as a report row."""
    q, q_next = alpha.q(n), alpha.q(n + 1)
    offset, truncation = None, L
    if offsets is None:
        offsets = default_offsets(method)

    if method == BOUND_METHODS.A.value:
        value, truncation = bound_a(alpha, seq, beta, n), 0
    elif method == BOUND_METHODS.B.value:
        value = bound_b(alpha, seq, beta, n, L)
    elif method == BOUND_METHODS.C.value:
        value, offset = bound_c(alpha, seq, beta, n, L, offsets)
    elif method == BOUND_METHODS.ORDER_STAT.value:
        value, offset = _order_stat(alpha, seq, beta, n, m, L, offsets, statistic)
    else:
        raise ValueError(
            f"Unknown bound method '{method}', expected one of {BOUND_METHODS.values()}"
        )

    return BoundRow(
        n=n,
        q=q,
        N=(q + q_next) // 2,
        Q=q + q_next,
        method=_method_label(method, m),
        beta=float(as_rational(beta)),
        value_mpi=value._mpi_,
        truncation_L=truncation,
        offset=offset,
        m=m if method == BOUND_METHODS.ORDER_STAT.value else None,
        direction="lower",
    )


def lower_bound_series(
    alpha: RotationNumber,
    seq: GapSequence,
    beta,
    window,
    method: str = "a",
    L: int = 0,
    m: int = 1,
    offsets: Optional[OffsetPolicy] = None,
    statistic: str = ORDER_STATISTICS.KTH.value,
    n_jobs: int = 1,
    verbose: bool = False,
) -> BoundSeries:
    """
    One estimator evaluated for every n of a window.

    Parameters
    ----------
    alpha : RotationNumber
    seq : GapSequence
    beta : float, str or sympy.Rational
    window : IndexWindow, range or (int, int)
    method : str
        "a", "b", "c" or "order-stat".
    L : int
        Block-sum truncation for methods b, c and order-stat.
    m : int
        Multiplicity of the order-statistic estimate.
    offsets : str or sequence of int, optional
        Offset policy for methods c and order-stat, ``default_offsets(method)`` when omitted.
    statistic : str
        Block statistic of the order-statistic estimate, "kth" or "sum".
    n_jobs : int
        Rows are independent and are evaluated with joblib; the result keeps the order of n.
    verbose : bool
        Show a progress bar on standard error (sequential evaluation only).

    Returns
    -------
    BoundSeries
    """
    if method not in BOUND_METHODS:
        raise ValueError(
            f"Unknown bound method '{method}', expected one of {BOUND_METHODS.values()}"
        )
    window = IndexWindow.from_value(window)
    alpha.extend(window.stop + 1)
    args = (method, L, m, offsets, statistic)

    if n_jobs == 1:
        rows = []
        progress = None
        if verbose:
            progress = ProgressBar(len(window), verb=f"Method {_method_label(method, m)}")
        for n in window:
            if progress is None:
                rows.append(bound_row(alpha, seq, beta, n, *args))
                continue
            with progress.step():
                rows.append(bound_row(alpha, seq, beta, n, *args))
    else:
        rows = Parallel(n_jobs=n_jobs)(
            delayed(bound_row)(alpha, seq, beta, n, *args) for n in window
        )

    return BoundSeries(
        method=_method_label(method, m),
        beta=float(as_rational(beta)),
        rows=list(rows),
        alpha=alpha.name,
        model=seq.name,
    )
