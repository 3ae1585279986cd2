from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from denjoypy.classes.gap_sequence import GapSequence
from denjoypy.exceptions.exceptions import OrbitPointError
from denjoypy.numba_tools.kernels import gap_length_array
from denjoypy.oracle.brute_force import brute_closest_returns
from denjoypy.parser.constants import ORBIT_RESOLUTION, RECURRENCE_BUDGET, TRUNCATION_BUDGET
from denjoypy.shared.intervals import upper


class TruncatedCircle:
    """
    The Denjoy circle built from a gap sequence, keeping the gaps J_k for |k| <= M.

    A point x of the rotation circle that is not on the orbit of 0 corresponds to a single point of
    the Denjoy circle, and the distance between two such points is the total length of the gaps
    whose orbit points k*alpha lie on the shorter of the two arcs between them. The gaps beyond M
    are not placed; their total mass is carried as ``tail_mass`` so that every distance is returned
    as an interval [kept sum, kept sum + tail mass].

    Parameters
    ----------
    seq : GapSequence
    M : int
        Truncation, at most ``TRUNCATION_BUDGET``.
    alpha_float : float
        Rotation number in double precision.
    """

    def __init__(self, seq: GapSequence, M: int, alpha_float: float):
        if not 1 <= M <= TRUNCATION_BUDGET:
            raise ValueError(f"The truncation M must lie in [1, {TRUNCATION_BUDGET}], found {M}")

        self.seq = seq
        self.M = int(M)
        self.alpha = float(alpha_float)

        indices = np.arange(-self.M, self.M + 1, dtype=np.int64)
        data = seq.kernel_data(self.M)
        lengths = gap_length_array(
            indices,
            data.kind,
            data.params,
            data.table_radius,
            data.table,
            data.exception_indices,
            data.exception_values,
        )
        positions = np.mod(indices * self.alpha, 1.0)

        order = np.argsort(positions, kind="stable")
        self.indices = indices[order]
        self.positions = positions[order]
        self.lengths = lengths[order]
        self.prefix = np.concatenate([[0.0], np.cumsum(self.lengths)])

        self.kept_mass = float(self.prefix[-1])
        self.tail_mass = upper(seq.tail_sum(self.M))

    @property
    def total_mass(self) -> float:
        """
        Kept lengths plus the upper end of the tail enclosure. Up to float rounding it is at least the
        sequence scale and exceeds it by at most the width of that enclosure.
        """
        return self.kept_mass + self.tail_mass

    def check_base_point(self, x0: float):
        """Raise ``OrbitPointError`` when x0 is within ``ORBIT_RESOLUTION`` of a kept orbit point."""
        x0 = float(np.mod(x0, 1.0))
        pos = int(np.searchsorted(self.positions, x0))
        for neighbour in (pos - 1, pos % self.positions.shape[0]):
            gap = abs(self.positions[neighbour] - x0)
            gap = min(gap, 1.0 - gap)
            if gap < ORBIT_RESOLUTION:
                raise OrbitPointError(x0, int(self.indices[neighbour]), gap)

    def forward_sums(self, start, stop) -> np.ndarray:
        """
        Kept mass on the open arcs running in positive direction from ``start`` to ``stop``;
        both arguments may be arrays of positions in [0, 1).
        """
        lo = np.searchsorted(self.positions, start, side="right")
        hi = np.searchsorted(self.positions, stop, side="left")
        inside = self.prefix[hi] - self.prefix[lo]
        return np.where(np.asarray(start) <= np.asarray(stop), inside, self.kept_mass + inside)

    def arc_mask(self, start: float, stop: float, positive: bool) -> np.ndarray:
        if start <= stop:
            mask = (self.positions > start) & (self.positions < stop)
        else:
            mask = (self.positions > start) | (self.positions < stop)
        return mask if positive else ~mask


@dataclass(frozen=True)
class DistanceSample:
    """
    d(f^n x0, x0) enclosed in [lo, hi], the orientation of the shorter arc, and the index k* of the
    largest kept gap on it (None when the arc holds no kept gap).
    """

    x0: float
    n_iter: int
    lo: float
    hi: float
    positive: bool
    k_star: Optional[int]

    def to_dict(self) -> dict:
        return {
            "x0": self.x0,
            "n_iter": self.n_iter,
            "lo": self.lo,
            "hi": self.hi,
            "positive": self.positive,
            "k_star": self.k_star,
        }


def denjoy_distance(circle: TruncatedCircle, x0: float, n_iter: int) -> DistanceSample:
    """
    Distance between x0 and its n_iter-th image on the Denjoy circle.

    The two arcs between x0 and x0 + n_iter*alpha are compared by their kept mass; on equal mass
    the arc in positive orientation is taken.

    Parameters
    ----------
    circle : TruncatedCircle
    x0 : float
        Point of the rotation circle, off the orbit of 0.
    n_iter : int
        At least 1.

    Returns
    -------
    DistanceSample
    """
    if n_iter < 1:
        raise ValueError(f"n_iter must be at least 1, found {n_iter}")
    circle.check_base_point(x0)

    start = float(np.mod(x0, 1.0))
    stop = float(np.mod(start + n_iter * circle.alpha, 1.0))

    forward = float(circle.forward_sums(start, stop))
    backward = circle.kept_mass - forward
    positive = forward <= backward
    kept = forward if positive else backward

    mask = circle.arc_mask(start, stop, positive)
    k_star = None
    if mask.any():
        k_star = int(circle.indices[mask][np.argmax(circle.lengths[mask])])

    return DistanceSample(
        x0=start,
        n_iter=int(n_iter),
        lo=kept,
        hi=kept + circle.tail_mass,
        positive=bool(positive),
        k_star=k_star,
    )


@dataclass
class RecurrenceCurves:
    """
    The values n * d(f^n x0, x0)^beta for 1 <= n <= n_max, in ``frame``, and the same values at the
    closest-return times q_n only, in ``closest_returns``. Both frames carry the lower and upper
    values from the distance interval and their running minima.
    """

    x0: float
    beta: float
    frame: pd.DataFrame
    closest_returns: pd.DataFrame

    def minima(self) -> dict:
        last = self.frame.iloc[-1]
        last_cr = self.closest_returns.iloc[-1]
        return {
            "all_lo": float(last["running_min_lo"]),
            "all_hi": float(last["running_min_hi"]),
            "closest_lo": float(last_cr["running_min_lo"]),
            "closest_hi": float(last_cr["running_min_hi"]),
        }

    def agrees(self) -> bool:
        """
        Whether the minimum over all n and the minimum over closest returns overlap, i.e. the
        closest returns alone account for the running minimum up to the truncation slack.
        """
        m = self.minima()
        return m["closest_lo"] <= m["all_hi"]


def _curve_frame(n: np.ndarray, lo: np.ndarray, hi: np.ndarray, beta: float) -> pd.DataFrame:
    value_lo = n * lo**beta
    value_hi = n * hi**beta
    return pd.DataFrame(
        {
            "n": n,
            "distance_lo": lo,
            "distance_hi": hi,
            "value_lo": value_lo,
            "value_hi": value_hi,
            "running_min_lo": np.minimum.accumulate(value_lo),
            "running_min_hi": np.minimum.accumulate(value_hi),
        }
    )


def recurrence_rate(
    circle: TruncatedCircle, x0: float, beta: float, n_max: int
) -> RecurrenceCurves:
    """
    Measure n * d(f^n x0, x0)^beta for every n <= n_max and along the closest returns.

    Parameters
    ----------
    circle : TruncatedCircle
    x0 : float
    beta : float
        Positive exponent.
    n_max : int
        At most ``RECURRENCE_BUDGET``.

    Returns
    -------
    RecurrenceCurves
    """
    if beta <= 0:
        raise ValueError(f"beta must be positive, found {beta}")
    if not 1 <= n_max <= RECURRENCE_BUDGET:
        raise ValueError(
            f"n_max = {n_max} is outside the recurrence budget [1, {RECURRENCE_BUDGET}]"
        )
    circle.check_base_point(x0)

    start = float(np.mod(x0, 1.0))
    n = np.arange(1, n_max + 1, dtype=np.int64)
    stops = np.mod(start + n * circle.alpha, 1.0)

    forward = circle.forward_sums(np.full(n.shape, start), stops)
    kept = np.minimum(forward, circle.kept_mass - forward)
    lo, hi = kept, kept + circle.tail_mass

    frame = _curve_frame(n, lo, hi, beta)
    returns = np.array([k for k, _ in brute_closest_returns(circle.alpha, n_max)], dtype=np.int64)
    closest = _curve_frame(returns, lo[returns - 1], hi[returns - 1], beta)

    return RecurrenceCurves(x0=start, beta=float(beta), frame=frame, closest_returns=closest)
