"""
Double-precision brute force over rotation orbits.

These routines validate the exact modules; they never certify anything. Comparisons and clustering
use the tolerance ``ORACLE_TOLERANCE``.
"""
from typing import List, Tuple

import numpy as np
import pandas as pd

from denjoypy.parser.constants import CLOSEST_RETURN_LIMIT, ENUMERATION_BUDGET, ORACLE_TOLERANCE

CHUNK_SIZE = 10**6


def circle_norm(x: np.ndarray) -> np.ndarray:
    """Distance to the nearest integer."""
    return np.abs(x - np.rint(x))


def brute_closest_returns(alpha_float: float, q_max: int) -> List[Tuple[int, float]]:
    """
    Indices 1 <= k <= q_max at which ||k alpha|| reaches a new strict minimum.

    For irrational alpha these are the convergent denominators q_n <= q_max.

    Parameters
    ----------
    alpha_float : float
    q_max : int
        At most 10^7.

    Returns
    -------
    list of (int, float)
        Pairs (k, ||k alpha||) in increasing k.
    """
    if q_max < 1:
        raise ValueError(f"q_max must be at least 1, found {q_max}")
    if q_max > CLOSEST_RETURN_LIMIT:
        raise ValueError(f"q_max = {q_max} exceeds the closest-return limit {CLOSEST_RETURN_LIMIT}")

    returns = []
    best = np.inf
    for start in range(1, q_max + 1, CHUNK_SIZE):
        k = np.arange(start, min(start + CHUNK_SIZE, q_max + 1), dtype=np.int64)
        norms = circle_norm(k * alpha_float)

        running = np.minimum.accumulate(norms)
        previous = np.concatenate([[best], running[:-1]])
        for pos in np.flatnonzero(norms < previous):
            returns.append((int(k[pos]), float(norms[pos])))

        best = min(best, running[-1])

    return returns


def cluster_values(values: np.ndarray, tol: float = ORACLE_TOLERANCE) -> pd.DataFrame:
    """
    Group sorted values whose consecutive differences are at most ``tol``.

    Returns
    -------
    pandas.DataFrame
        Columns length (cluster mean) and multiplicity, sorted by decreasing length.
    """
    values = np.sort(np.asarray(values, dtype=float))
    breaks = np.flatnonzero(np.diff(values) > tol) + 1
    groups = np.split(values, breaks)

    frame = pd.DataFrame(
        {
            "length": [g.mean() for g in groups],
            "multiplicity": [g.size for g in groups],
        }
    )
    return frame.sort_values("length", ascending=False, ignore_index=True)


def sorted_gap_oracle(alpha_float: float, K: int, tol: float = ORACLE_TOLERANCE) -> pd.DataFrame:
    """
    Float gap lengths of the orbit {k alpha : 0 <= k <= K}, clustered at ``tol``.

    The fractional parts are sorted and the K + 1 circular gaps between neighbours are grouped.
    """
    if K < 1:
        raise ValueError(f"K must be at least 1, found {K}")
    if K + 1 > ENUMERATION_BUDGET:
        raise ValueError(f"K = {K} exceeds the enumeration budget {ENUMERATION_BUDGET}")

    positions = np.sort(np.mod(np.arange(K + 1, dtype=np.int64) * alpha_float, 1.0))
    gaps = np.diff(np.append(positions, positions[0] + 1.0))
    return cluster_values(gaps, tol)
